#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pcrfle {

struct CliCommand {
  std::string subcommand; ///< fit, sweep, seminorm, eigen, gridsearch or zoo
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> overrides; ///< "key=value", applied in order
};

inline constexpr const char *output_dir_env = "PCRFLE_OUT_DIR";

/// Throws InvalidInput on unknown subcommands, unknown flags or malformed
/// overrides. Without --out the directory comes from PCRFLE_OUT_DIR, then
/// ./pcrfle_out.
CliCommand parse_command_line(const std::vector<std::string> &args);

/// Runs the command. Failures write error.json to the output directory and a
/// one-line JSON record to `err`; the return value is the exit status.
int run(const CliCommand &command, std::ostream &err);

/// parse_command_line + run, with parse failures reported the same way.
int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pcrfle
