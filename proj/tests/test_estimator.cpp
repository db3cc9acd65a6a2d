#include "pcrfle/errors.hpp"
#include "pcrfle/estimator.hpp"
#include "pcrfle/experiments.hpp"

#include "choose_k_table.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcrfle;
using pcrfle::testing::random_cloud;
using pcrfle::testing::random_vector;

TEST(TuningRule, Validation) {
  TuningRule r;
  r.s = 1.5;
  try {
    r.validate();
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput &e) {
    EXPECT_NE(std::string(e.what()).find("s must lie in (0,1)"), std::string::npos);
  }
  r = TuningRule{};
  r.M = 0.0;
  EXPECT_THROW(r.validate(), InvalidInput);
  r = TuningRule{};
  r.dim = 0;
  EXPECT_THROW(r.validate(), InvalidInput);
}

TEST(ChooseK, OracleTable) {
  for (const auto &row : pcrfle::testing::choose_k_table) {
    TuningRule r;
    r.M = row.M;
    r.s = row.s;
    r.dim = row.d;
    EXPECT_EQ(choose_K(r, row.n), row.K) << "M=" << row.M << " n=" << row.n << " s=" << row.s << " d=" << row.d;
  }
}

TEST(ChooseK, Regimes) {
  TuningRule r;
  r.s = 0.5;
  r.M = 1.0;
  EXPECT_EQ(choose_K(r, 1000), 31u);
  r.M = 0.01;
  EXPECT_EQ(choose_K(r, 100), 1u);
  // M > n^(s/d) saturates at n.
  r.M = std::pow(100.0, 0.5) + 1.0;
  EXPECT_EQ(choose_K(r, 100), 100u);
}

TEST(ChooseEpsilon, WindowMidpoint) {
  TuningRule r;
  const auto w = epsilon_window(r, 1000, 31);
  EXPECT_NEAR(w.lower, 0.00690775527898214, 1e-15);
  EXPECT_NEAR(w.upper, 0.0322580645161290, 1e-15);
  EXPECT_NEAR(choose_epsilon(r, 1000, 31), 0.0149275187305539, 1e-14);

  r.C0 = 2.5;
  EXPECT_DOUBLE_EQ(epsilon_window(r, 1000, 1).upper, 2.5);

  r.c0 = 1e6;
  r.C0 = 1e-6;
  EXPECT_THROW(choose_epsilon(r, 1000, 31), TuningError);
}

TEST(Fit, InterpolatesAtFullRank) {
  const auto s = random_cloud(200, 1, 5.0, 3);
  const auto y = random_vector(200, 4);
  const auto f = fit(s.with_responses(y), 200, 0.3, KernelSpec::truncated_gaussian());
  EXPECT_LT((f.fitted - y).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(f.K, 200u);
}

TEST(Fit, MeanAtRankOne) {
  const auto s = SampleSet::from_rows({{0.0}, {0.1}, {0.2}}, std::vector<double>{2.0, 4.0, 6.0});
  const auto f = fit(s, 1, 0.5, KernelSpec::indicator());
  EXPECT_TRUE(f.connected());
  EXPECT_LT((f.fitted - Eigen::Vector3d::Constant(4.0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fit, ZeroAndOversizedRank) {
  const auto s = SampleSet::from_rows({{0.0}, {0.1}, {0.2}}, std::vector<double>{2.0, 4.0, 6.0});
  const auto f = fit(s, 0, 0.5, KernelSpec::indicator());
  EXPECT_EQ(f.fitted, Eigen::VectorXd::Zero(3));
  EXPECT_THROW(fit(s, 4, 0.5, KernelSpec::indicator()), InvalidInput);
  EXPECT_THROW(fit(random_cloud(3, 1, 1.0, 1), 1, 0.5, KernelSpec::indicator()), InvalidInput);
}

TEST(Fit, ProjectionIdentities) {
  const auto s = random_cloud(150, 1, 1.0, 21);
  const auto y = random_vector(150, 22);
  const auto f = fit(s.with_responses(y), 12, 0.1, KernelSpec::truncated_gaussian());
  EXPECT_NEAR(norm_n_sq(f.fitted) + norm_n_sq(y - f.fitted), norm_n_sq(y), 1e-8);
  Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(150);
  for (Eigen::Index k = 0; k < 12; ++k)
    rebuilt += f.projections(k) * f.eig->vectors.col(k);
  EXPECT_LT((rebuilt - f.fitted).cwiseAbs().maxCoeff(), 1e-10);
  // Refitting the fitted values changes nothing.
  EXPECT_LT((project(*f.eig, f.fitted, 12) - f.fitted).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fit, DisconnectedGraphIsReported) {
  const auto s = SampleSet::from_rows({{0.0}, {0.1}, {5.0}, {5.1}}, std::vector<double>{1.0, 2.0, 3.0, 4.0});
  const auto f = fit(s, 2, 0.5, KernelSpec::indicator());
  EXPECT_FALSE(f.connected());
  EXPECT_EQ(f.component_count, 2u);
  // Two constant-per-component vectors reproduce the component means.
  EXPECT_NEAR(f.fitted(0), 1.5, 1e-12);
  EXPECT_NEAR(f.fitted(3), 3.5, 1e-12);
}

TEST(GridSearch, SingleCell) {
  const auto s = random_cloud(80, 1, 1.0, 5);
  const auto y = random_vector(80, 6);
  const auto r = grid_search(s.with_responses(y), {7}, {0.2}, KernelSpec::indicator(), Eigen::VectorXd::Zero(80));
  EXPECT_EQ(r.best_K, 7u);
  EXPECT_EQ(r.best_epsilon, 0.2);
  EXPECT_EQ(r.mse_surface.rows(), 1);
  EXPECT_EQ(r.mse_surface.cols(), 1);
  const auto direct = fit(s.with_responses(y), 7, 0.2, KernelSpec::indicator());
  EXPECT_NEAR(r.best_mse, norm_n_sq(direct.fitted), 1e-12);
}

TEST(GridSearch, NoiselessFullRankWins) {
  const auto s = random_cloud(60, 1, 1.0, 8);
  const Eigen::VectorXd truth = s.points().col(0).array().sin();
  const auto r = grid_search(s.with_responses(truth), {1, 5, 20, 60}, {0.1, 0.3}, KernelSpec::truncated_gaussian(),
                             truth);
  EXPECT_EQ(r.best_K, 60u);
  EXPECT_LT(r.best_mse, 1e-16);
}

TEST(GridSearch, RejectsBadGrids) {
  const auto s = random_cloud(20, 1, 1.0, 1).with_responses(Eigen::VectorXd::Zero(20));
  const Eigen::VectorXd t = Eigen::VectorXd::Zero(20);
  EXPECT_THROW(grid_search(s, {}, {0.1}, KernelSpec::indicator(), t), InvalidInput);
  EXPECT_THROW(grid_search(s, {1}, {}, KernelSpec::indicator(), t), InvalidInput);
  EXPECT_THROW(grid_search(s, {21}, {0.1}, KernelSpec::indicator(), t), InvalidInput);
  EXPECT_THROW(grid_search(s, {1}, {0.1}, KernelSpec::indicator(), Eigen::VectorXd::Zero(3)), InvalidInput);
}

TEST(GridSearch, SharpMinimumInKFlatInEpsilon) {
  ExperimentConfig cfg;
  const auto samples = generate(cfg, 500, 0);
  const auto truth = truth_values(cfg, samples);
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= 80; ++k)
    ks.push_back(k);
  const std::vector<double> eps{0.1, 0.2, 0.3};
  const auto r = grid_search(samples, ks, eps, cfg.kernel, truth);
  EXPECT_GT(r.best_K, 1u);
  EXPECT_LT(r.best_K, 80u);

  // Spread across K (best epsilon per K) against spread across epsilon
  // (best K per epsilon).
  const Eigen::VectorXd per_k = r.mse_surface.colwise().minCoeff();
  const Eigen::VectorXd per_eps = r.mse_surface.rowwise().minCoeff();
  const double k_spread = per_k.maxCoeff() / r.best_mse;
  const double eps_spread = per_eps.maxCoeff() / r.best_mse;
  EXPECT_GT(k_spread, 3.0);
  EXPECT_LT(eps_spread, k_spread);
}

TEST(BiasVariance, Decomposition) {
  const auto s = random_cloud(100, 1, 1.0, 13);
  const auto y = random_vector(100, 14);
  const auto f = fit(s.with_responses(y), 10, 0.2, KernelSpec::truncated_gaussian());
  ASSERT_TRUE(f.connected());

  EXPECT_NEAR(bias_variance_decompose(f, Eigen::VectorXd::Constant(100, 3.0)).bias_sq, 0.0, 1e-12);

  const auto full = fit(s.with_responses(y), 100, 0.2, KernelSpec::truncated_gaussian());
  EXPECT_NEAR(bias_variance_decompose(full, random_vector(100, 15)).bias_sq, 0.0, 1e-10);

  const auto one = fit(s.with_responses(y), 1, 0.2, KernelSpec::truncated_gaussian());
  const Eigen::VectorXd v2 = f.eig->vectors.col(1);
  const auto bv = bias_variance_decompose(one, v2);
  EXPECT_NEAR(bv.bias_sq, 1.0, 1e-10);
  EXPECT_NEAR(bv.variance_proxy, norm_n_sq(one.fitted), 1e-10);
}
