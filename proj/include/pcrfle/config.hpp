#pragma once

#include "pcrfle/errors.hpp"
#include "pcrfle/experiments.hpp"
#include "pcrfle/sobolev.hpp"
#include "pcrfle/test_functions.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcrfle {

/// Sample source for `fit` and `gridsearch`: a CSV file, or a generated
/// replicate of the experiment model.
struct FitSection {
  std::string data;     ///< CSV path; empty means generate
  std::size_t n = 500;
  std::size_t rep = 0;

  bool operator==(const FitSection &) const = default;
};

struct EigenSection {
  std::size_t n = 300;
  std::size_t m = 300;

  bool operator==(const EigenSection &) const = default;
};

struct SeminormSection {
  std::string function; ///< empty means the configured truth
  double s = 0.25;
  QuadratureOptions quadrature;

  bool operator==(const SeminormSection &o) const {
    return function == o.function && s == o.s && quadrature.min_level == o.quadrature.min_level &&
           quadrature.max_level == o.quadrature.max_level &&
           quadrature.relative_tolerance == o.quadrature.relative_tolerance &&
           quadrature.divergence_run == o.quadrature.divergence_run;
  }
};

/// Optional mean-fit curve written next to a sweep.
struct CurveSection {
  std::size_t n = 0; ///< 0 disables the curve
  std::size_t points = 201;

  bool operator==(const CurveSection &) const = default;
};

/// Effective configuration shared by every subcommand.
struct AppConfig {
  std::string truth_name = "f2";
  std::vector<TestFunction> extra_functions;
  ExperimentConfig experiment;
  FitSection fit;
  EigenSection eigen;
  SeminormSection seminorm;
  CurveSection curve;

  /// Built-in truths followed by extra_functions (later names win).
  std::vector<TestFunction> zoo() const;

  bool operator==(const AppConfig &o) const;
};

/// Parse diagnostics carry "line N" of the offending key.
class ConfigError : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// Parses YAML text. Overrides are dotted "key=value" pairs applied before
/// validation; values use YAML scalar or flow syntax.
AppConfig parse_config_text(const std::string &text,
                            const std::vector<std::string> &overrides = {});
AppConfig parse_config(const std::filesystem::path &path,
                       const std::vector<std::string> &overrides = {});

/// Effective configuration as YAML; parse_config_text inverts it exactly.
std::string to_yaml(const AppConfig &config);

/// Zoo definitions as YAML (list under "functions").
std::string zoo_to_yaml(const std::vector<TestFunction> &functions);
std::vector<TestFunction> zoo_from_yaml(const std::string &text);

std::string to_string(TuningMode mode);

} // namespace pcrfle
