#pragma once

#include "pcrfle/estimator.hpp"
#include "pcrfle/kernel.hpp"
#include "pcrfle/test_functions.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pcrfle {

/// Uniform design on the box [low, high]^dim.
struct UniformDesign {
  double low = 0.0;
  double high = 5.0;
  std::size_t dim = 1;

  bool operator==(const UniformDesign &) const = default;
};

enum class TuningMode { grid, rule, fixed };

/// Sentinel for "K = n" in fixed tuning.
inline constexpr std::size_t K_all = std::numeric_limits<std::size_t>::max();

struct TuningConfig {
  TuningMode mode = TuningMode::grid;
  TuningRule rule;
  std::vector<std::size_t> K_grid;
  std::vector<double> eps_grid;
  std::size_t K = 10;     ///< fixed mode; K_all means n
  double epsilon = 0.2;   ///< fixed mode
};

struct ExperimentConfig {
  TestFunction truth = builtin_zoo()[1];
  UniformDesign design;
  double noise_sd = 1.0;
  std::vector<std::size_t> n_grid = {500, 625, 750, 875, 1000};
  std::size_t repetitions = 200;
  KernelSpec kernel = KernelSpec::truncated_gaussian();
  TuningConfig tuning = default_tuning();
  std::uint64_t seed = 20240601;

  static TuningConfig default_tuning();

  /// Throws InvalidInput on any violated invariant.
  void validate() const;
};

/// Per-task generator seed derived from (seed, n, repetition, attempt).
std::uint64_t stream_key(std::uint64_t seed, std::size_t n, std::size_t rep, std::size_t attempt = 0);

/// X uniform on the design box, without responses.
SampleSet draw_design(const ExperimentConfig &config, std::size_t n, std::size_t rep,
                      std::size_t attempt = 0);

/// X uniform on the design box, Y = f(X) + N(0, noise_sd^2). The stream is
/// a pure function of (seed, n, rep, attempt). Needs a 1-D design.
SampleSet generate(const ExperimentConfig &config, std::size_t n, std::size_t rep,
                   std::size_t attempt = 0);

/// Truth values at the design points.
Eigen::VectorXd truth_values(const ExperimentConfig &config, const SampleSet &samples);

/// Tuning plus fit for one sample set.
struct ReplicateFit {
  RegressionFit fit;
  double mse = 0.0;
};

ReplicateFit fit_replicate(const ExperimentConfig &config, const SampleSet &samples,
                           const Eigen::VectorXd &truth);

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t rep = 0;
  std::size_t K = 0;
  double epsilon = 0.0;
  double mse = 0.0;
  bool connected = true;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit ols(const std::vector<double> &x, const std::vector<double> &y);

struct ExperimentReport {
  std::vector<ExperimentRecord> records; ///< (n, rep) order, failures omitted
  std::vector<std::size_t> n_values;
  std::vector<double> mean_mse_per_n;
  std::vector<double> disconnected_fraction;
  std::vector<bool> used_in_slope;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  double theoretical_slope = 0.0;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
};

/// -2s / (2s + d).
double theoretical_rate(double s, std::size_t dim);

ExperimentReport run_sweep(const ExperimentConfig &config);

struct EigenGrowth {
  double epsilon = 0.0;
  std::size_t computed = 0;
  bool insufficient_range = false;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  std::size_t pre_cap_points = 0;
  double post_cap_exponent = std::numeric_limits<double>::quiet_NaN();
  bool plateau = false;
  /// max_k lambda_k * eps^2.
  double cap_constant = 0.0;
  /// Fraction of k in [2, m] with lambda_k / min(k^(2/d), eps^-2) outside
  /// [median / band, median * band].
  double window_violations = 0.0;
  double sandwich_band = 10.0;
  Eigen::VectorXd values;
};

/// Spectrum growth on one generated design. epsilon comes from the tuning
/// rule (theorem scaling) unless tuning is fixed.
EigenGrowth eigenvalue_growth_diagnostic(const ExperimentConfig &config, std::size_t n, std::size_t m);

struct FitCurve {
  std::vector<double> x;
  std::vector<double> truth;
  std::vector<double> mean_fit; ///< NaN where missing
  std::vector<bool> missing;
};

/// Average fitted curve over repetitions at sample size n. Each grid point
/// takes the nearest design point inside its bucket (half the grid spacing
/// either side); buckets without one are flagged missing.
FitCurve mean_fit_curve(const ExperimentConfig &config, std::size_t n, const std::vector<double> &grid);

} // namespace pcrfle
