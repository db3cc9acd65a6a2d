#include "pcrfle/errors.hpp"
#include "pcrfle/experiments.hpp"

#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <numeric>

using namespace pcrfle;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_grid = {60, 90};
  cfg.repetitions = 3;
  cfg.tuning.K_grid = {1, 2, 4, 8, 16};
  cfg.tuning.eps_grid = {0.3, 0.6};
  return cfg;
}

} // namespace

TEST(Generate, NoiselessResponsesEqualTruth) {
  auto cfg = small_config();
  cfg.noise_sd = 0.0;
  const auto s = generate(cfg, 200, 4);
  EXPECT_EQ(s.responses(), truth_values(cfg, s));
  EXPECT_GE(s.points().minCoeff(), 0.0);
  EXPECT_LE(s.points().maxCoeff(), 5.0);
}

TEST(Generate, Deterministic) {
  const auto cfg = small_config();
  const auto a = generate(cfg, 300, 2);
  const auto b = generate(cfg, 300, 2);
  EXPECT_EQ(a.points(), b.points());
  EXPECT_EQ(a.responses(), b.responses());
  const auto c = generate(cfg, 300, 3);
  EXPECT_NE(a.points(), c.points());
  // The design does not depend on the noise level.
  auto quiet = cfg;
  quiet.noise_sd = 0.0;
  EXPECT_EQ(generate(quiet, 300, 2).points(), a.points());
}

TEST(Generate, UniformMoments) {
  const auto s = generate(small_config(), 100000, 0);
  const Eigen::VectorXd x = s.points().col(0);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / static_cast<double>(x.size() - 1);
  EXPECT_NEAR(mean, 2.5, 0.02);
  EXPECT_NEAR(var, 25.0 / 12.0, 0.05);
  const Eigen::VectorXd noise = s.responses() - truth_values(small_config(), s);
  EXPECT_NEAR(noise.mean(), 0.0, 0.02);
  EXPECT_NEAR(std::sqrt(noise.squaredNorm() / static_cast<double>(noise.size())), 1.0, 0.02);
}

TEST(Config, Validation) {
  auto cfg = small_config();
  cfg.n_grid = {100, 100};
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = small_config();
  cfg.repetitions = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = small_config();
  cfg.n_grid = {1, 5};
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = small_config();
  cfg.design.high = 7.0; // leaves the domain of f2
  EXPECT_THROW(cfg.validate(), InvalidInput);
  EXPECT_NO_THROW(small_config().validate());
}

TEST(Ols, ExactLine) {
  const auto f = ols({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-7);
  EXPECT_THROW(ols({1.0}, {2.0}), InvalidInput);
  EXPECT_THROW(ols({1.0, 1.0}, {2.0, 3.0}), InvalidInput);
}

TEST(TheoreticalRate, Formula) {
  EXPECT_NEAR(theoretical_rate(0.45, 1), -0.9 / 1.9, 1e-15);
  EXPECT_NEAR(theoretical_rate(0.5, 2), -1.0 / 3.0, 1e-15);
}

TEST(RunSweep, InterpolationGivesZeroError) {
  auto cfg = small_config();
  cfg.noise_sd = 0.0;
  cfg.tuning.mode = TuningMode::fixed;
  cfg.tuning.K = K_all;
  cfg.tuning.epsilon = 0.5;
  const auto r = run_sweep(cfg);
  EXPECT_EQ(r.failures, 0u);
  ASSERT_EQ(r.records.size(), 6u);
  for (const auto &rec : r.records) {
    EXPECT_EQ(rec.K, rec.n);
    EXPECT_LT(rec.mse, 1e-20);
  }
}

TEST(RunSweep, TwoPointSlope) {
  auto cfg = small_config();
  cfg.repetitions = 1;
  const auto r = run_sweep(cfg);
  ASSERT_EQ(r.mean_mse_per_n.size(), 2u);
  const double quotient = (std::log(r.mean_mse_per_n[1]) - std::log(r.mean_mse_per_n[0])) /
                          (std::log(90.0) - std::log(60.0));
  EXPECT_NEAR(r.fitted_slope, quotient, 1e-12);
}

TEST(RunSweep, MeansAndOrdering) {
  const auto cfg = small_config();
  const auto r = run_sweep(cfg);
  ASSERT_EQ(r.records.size(), 6u);
  for (std::size_t i = 0; i < r.n_values.size(); ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto &rec : r.records)
      if (rec.n == r.n_values[i]) {
        sum += rec.mse;
        ++count;
      }
    EXPECT_EQ(count, 3u);
    EXPECT_DOUBLE_EQ(r.mean_mse_per_n[i], sum / 3.0);
  }
  for (std::size_t k = 1; k < r.records.size(); ++k) {
    const auto &a = r.records[k - 1];
    const auto &b = r.records[k];
    EXPECT_TRUE(a.n < b.n || (a.n == b.n && a.rep < b.rep));
  }
  EXPECT_NEAR(r.theoretical_slope, theoretical_rate(cfg.tuning.rule.s, 1), 0.0);
}

TEST(RunSweep, IndependentOfThreadCount) {
  const auto cfg = small_config();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = run_sweep(cfg);
  omp_set_num_threads(4);
  const auto b = run_sweep(cfg);
  omp_set_num_threads(saved);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].mse, b.records[k].mse);
    EXPECT_EQ(a.records[k].K, b.records[k].K);
    EXPECT_EQ(a.records[k].epsilon, b.records[k].epsilon);
  }
  EXPECT_EQ(a.fitted_slope, b.fitted_slope);
}

TEST(RunSweep, SkipsHeavilyDisconnectedSmallestN) {
  auto cfg = small_config();
  cfg.n_grid = {10, 200, 300, 400};
  cfg.repetitions = 2;
  cfg.tuning.mode = TuningMode::fixed;
  cfg.tuning.K = 3;
  cfg.tuning.epsilon = 0.2;
  const auto r = run_sweep(cfg);
  ASSERT_EQ(r.disconnected_fraction.size(), 4u);
  EXPECT_GT(r.disconnected_fraction[0], 0.1);
  EXPECT_FALSE(r.used_in_slope[0]);
  EXPECT_TRUE(r.used_in_slope[3]);
}

TEST(EigenGrowth, InsufficientRange) {
  auto cfg = small_config();
  cfg.design = {0.0, 1.0, 1};
  cfg.truth = find_function(builtin_zoo(), "step");
  const auto g = eigenvalue_growth_diagnostic(cfg, 200, 2);
  EXPECT_TRUE(g.insufficient_range);
  EXPECT_TRUE(std::isnan(g.exponent));
  EXPECT_THROW(eigenvalue_growth_diagnostic(cfg, 20, 21), InvalidInput);
}

TEST(EigenGrowth, QuadraticBeforeCap) {
  auto cfg = small_config();
  cfg.design = {0.0, 1.0, 1};
  cfg.truth = find_function(builtin_zoo(), "step");
  cfg.tuning.mode = TuningMode::fixed;
  // Small enough to leave ~50 indices below the cap; with only a handful the
  // (k - 1)^2 shape of the spectrum reads as a slope well above 2.
  cfg.tuning.epsilon = 0.02;
  const auto g = eigenvalue_growth_diagnostic(cfg, 500, 200);
  EXPECT_FALSE(g.insufficient_range);
  EXPECT_GE(g.exponent, 1.6);
  EXPECT_LE(g.exponent, 2.4);
  EXPECT_TRUE(g.plateau);
  EXPECT_GT(g.cap_constant, 0.0);
  EXPECT_LE(g.values.maxCoeff(), g.cap_constant / (0.02 * 0.02) * (1.0 + 1e-12));
}

TEST(MeanFitCurve, InterpolationMatchesTruth) {
  auto cfg = small_config();
  cfg.noise_sd = 0.0;
  cfg.repetitions = 2;
  cfg.tuning.mode = TuningMode::fixed;
  cfg.tuning.K = K_all;
  cfg.tuning.epsilon = 0.5;
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i)
    grid.push_back(0.1 * i);
  const auto c = mean_fit_curve(cfg, 80, grid);
  std::size_t present = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (c.missing[g]) {
      EXPECT_TRUE(std::isnan(c.mean_fit[g]));
      continue;
    }
    ++present;
    // The nearest design point lies within half a grid step; f2 only jumps
    // at integers, so away from them the value is the truth.
    const double frac = grid[g] - std::round(grid[g]);
    if (std::abs(frac) > 0.06)
      EXPECT_NEAR(c.mean_fit[g], c.truth[g], 1e-8) << grid[g];
  }
  EXPECT_GT(present, 30u);
}

TEST(MeanFitCurve, EmptyBucketsAreMissing) {
  auto cfg = small_config();
  cfg.repetitions = 1;
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i)
    grid.push_back(0.005 * i);
  const auto c = mean_fit_curve(cfg, 20, grid);
  const auto missing = std::count(c.missing.begin(), c.missing.end(), true);
  EXPECT_GT(missing, 900);
  EXPECT_LT(missing, 1001);
  EXPECT_THROW(mean_fit_curve(cfg, 20, {}), InvalidInput);
  EXPECT_THROW(mean_fit_curve(cfg, 20, {1.0, 0.5}), InvalidInput);
}

TEST(MeanFitCurve, TracksBlocksAwayFromJumps) {
  ExperimentConfig cfg;
  cfg.repetitions = 20;
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i)
    grid.push_back(0.05 * i);
  const auto c = mean_fit_curve(cfg, 1000, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    bool near_jump = false;
    for (double b : cfg.truth.interior_breakpoints())
      near_jump = near_jump || std::abs(x - b) <= 0.2;
    if (near_jump || c.missing[g])
      continue;
    EXPECT_NEAR(c.mean_fit[g], c.truth[g], 0.25) << "x=" << x;
  }
}
