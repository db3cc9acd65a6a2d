#include "pcrfle/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return pcrfle::main_entry(argc, argv, std::cout, std::cerr); }
