#pragma once

// Generated by tests/oracles/choose_k_table.py (mpmath, 60 digits).

#include <cstddef>

namespace pcrfle::testing {

struct ChooseKRow {
  double M;
  std::size_t n;
  double s;
  std::size_t d;
  std::size_t K;
};

inline constexpr ChooseKRow choose_k_table[] = {
    {1.0, 1000, 0.5, 1, 31},
    {0.01, 100, 0.5, 1, 1},
    {1.0, 100, 0.5, 1, 10},
    {2.0, 16, 0.5, 1, 8},
    {1.0, 64, 0.25, 2, 27},
    {3.0, 27, 0.5, 1, 15},
    {1.0, 1, 0.3, 1, 1},
    {50.0, 10, 0.2, 1, 10},
    {1.0, 81, 0.5, 2, 18},
    {0.5, 400, 0.5, 1, 10},
    {1.5, 37, 0.75, 1, 5},
    {0.1, 4096, 0.1, 3, 32},
    {0.05, 4096, 0.45, 1, 3},
    {0.1, 777, 0.75, 1, 2},
    {0.7, 10, 0.99, 5, 3},
    {0.05, 100000, 0.1, 2, 151},
    {0.05, 100000, 0.75, 1, 9},
    {0.7, 2, 0.99, 2, 1},
    {1.0, 777, 0.25, 1, 84},
    {1.0, 4096, 0.25, 1, 256},
    {0.7, 500, 0.1, 1, 97},
    {0.05, 100000, 0.45, 5, 107},
    {10.0, 777, 0.6, 5, 777},
    {4.0, 500, 0.5, 2, 400},
    {0.3, 100, 0.1, 3, 7},
    {10.0, 1000, 0.6, 5, 1000},
    {1.0, 100000, 0.1, 1, 14677},
    {10.0, 777, 0.25, 3, 777},
    {0.3, 1000, 0.75, 1, 6},
    {0.1, 4096, 0.6, 3, 14},
    {1.5, 100000, 0.9, 5, 8618},
    {0.1, 10, 0.5, 5, 1},
    {0.1, 2, 0.5, 5, 1},
    {1.0, 777, 0.6, 1, 20},
    {4.0, 500, 0.25, 1, 400},
    {4.0, 2, 0.45, 3, 2},
    {0.3, 100, 0.75, 5, 5},
    {4.0, 10, 0.25, 5, 10},
    {2.0, 4096, 0.5, 2, 645},
    {2.0, 4096, 0.5, 5, 3250},
    {1.5, 777, 0.45, 2, 172},
    {0.1, 37, 0.25, 2, 1},
    {0.7, 2, 0.9, 2, 1},
    {1.0, 250, 0.05, 2, 192},
    {2.0, 4096, 0.6, 3, 1024},
    {0.3, 4096, 0.05, 5, 328},
    {10.0, 777, 0.75, 5, 777},
    {2.0, 10, 0.9, 5, 10},
    {0.05, 100, 0.1, 2, 1},
    {4.0, 37, 0.1, 3, 37},
};

} // namespace pcrfle::testing
