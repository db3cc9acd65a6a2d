#pragma once

#include "pcrfle/graph.hpp"
#include "pcrfle/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <vector>

namespace pcrfle {

/// Inputs of the theorem-driven tuning rule.
struct TuningRule {
  double s = 0.45;    ///< smoothness, in (0, 1)
  double M = 1.0;     ///< Sobolev radius
  std::size_t dim = 1;
  double c0 = 1.0;    ///< lower epsilon constant
  double C0 = 1.0;    ///< upper epsilon constant

  /// Throws InvalidInput on s outside (0,1), M <= 0, dim < 1 or
  /// non-positive constants.
  void validate() const;
};

/// min(max(floor((M^2 n)^(d / (2s + d))), 1), n).
std::size_t choose_K(const TuningRule &rule, std::size_t n);

struct EpsilonWindow {
  double lower;
  double upper;
};

/// [c0 (log n / n)^(1/d), C0 K^(-1/d)].
EpsilonWindow epsilon_window(const TuningRule &rule, std::size_t n, std::size_t K);

/// Geometric midpoint of the epsilon window. Throws TuningError when the
/// window is empty.
double choose_epsilon(const TuningRule &rule, std::size_t n, std::size_t K);

struct RegressionFit {
  Eigen::VectorXd fitted;
  std::size_t K = 0;
  double epsilon = 0.0;
  Eigen::VectorXd projections; ///< <Y, v_k>_n for k < K
  std::shared_ptr<const EigenSystem> eig; ///< null when K = 0
  std::size_t component_count = 0;

  bool connected() const { return component_count == 1; }
};

/// V_K V_K^T y under the |.|_n normalization.
Eigen::VectorXd project(const EigenSystem &eig, const Eigen::VectorXd &y, std::size_t K);

/// Fit on a precomputed eigensystem with at least K pairs.
RegressionFit fit_on(std::shared_ptr<const EigenSystem> eig, const Eigen::VectorXd &y, std::size_t K,
                     double epsilon, std::size_t component_count);

/// Builds the graph at epsilon, solves for K eigenpairs and projects the
/// responses. Disconnected graphs are allowed; component_count reports them.
RegressionFit fit(const SampleSet &samples, std::size_t K, double epsilon, const KernelSpec &kernel,
                  const EigenOptions &options = {});

struct GridCell {
  std::size_t K;
  double epsilon;
  double mse;
};

struct GridSearchResult {
  std::size_t best_K = 0;
  double best_epsilon = 0.0;
  double best_mse = 0.0;
  /// Row per epsilon (grid order), column per K (grid order).
  Eigen::MatrixXd mse_surface;
  std::vector<GridCell> cells;
  /// Eigensystem and component count at best_epsilon, for refitting.
  std::shared_ptr<const EigenSystem> best_eig;
  std::size_t best_component_count = 0;
};

/// In-sample MSE |f_hat - truth|_n^2 over every (K, epsilon) pair; ties go
/// to the smaller K, then the smaller epsilon.
GridSearchResult grid_search(const SampleSet &samples, const std::vector<std::size_t> &K_grid,
                             const std::vector<double> &eps_grid, const KernelSpec &kernel,
                             const Eigen::VectorXd &truth, const EigenOptions &options = {});

struct BiasVariance {
  double bias_sq = 0.0;        ///< |f - Pi_K f|_n^2
  double variance_proxy = 0.0; ///< |f_hat - Pi_K f|_n^2
};

BiasVariance bias_variance_decompose(const RegressionFit &fit, const Eigen::VectorXd &truth);

} // namespace pcrfle
