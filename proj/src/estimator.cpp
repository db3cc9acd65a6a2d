#include "pcrfle/estimator.hpp"

#include "pcrfle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace pcrfle {

void TuningRule::validate() const {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("s must lie in (0,1)");
  if (!(M > 0.0) || !std::isfinite(M))
    throw InvalidInput("M must be positive");
  if (dim < 1)
    throw InvalidInput("dimension must be >= 1");
  if (!(c0 > 0.0) || !(C0 > 0.0))
    throw InvalidInput("c0 and C0 must be positive");
}

std::size_t choose_K(const TuningRule &rule, std::size_t n) {
  rule.validate();
  if (n < 1)
    throw InvalidInput("n must be >= 1");
  const double d = static_cast<double>(rule.dim);
  const double target = rule.M * rule.M * static_cast<double>(n);
  const double power = (2.0 * rule.s + d) / d;
  const double x = std::pow(target, 1.0 / power);
  if (!(x < static_cast<double>(n)))
    return n;
  auto k = static_cast<std::size_t>(std::floor(x));
  // pow() can land just below an exact integer; confirm k against
  // k^power <= M^2 n with a relative slack of a few ulps.
  constexpr double slack = 1e-12;
  if (std::pow(static_cast<double>(k + 1), power) <= target * (1.0 + slack))
    ++k;
  else if (k > 0 && std::pow(static_cast<double>(k), power) > target * (1.0 + slack))
    --k;
  return std::min(std::max<std::size_t>(k, 1), n);
}

EpsilonWindow epsilon_window(const TuningRule &rule, std::size_t n, std::size_t K) {
  rule.validate();
  if (n < 2)
    throw InvalidInput("epsilon window needs n >= 2");
  if (K < 1)
    throw InvalidInput("epsilon window needs K >= 1");
  const double d = static_cast<double>(rule.dim);
  const double nn = static_cast<double>(n);
  return {rule.c0 * std::pow(std::log(nn) / nn, 1.0 / d),
          rule.C0 * std::pow(static_cast<double>(K), -1.0 / d)};
}

double choose_epsilon(const TuningRule &rule, std::size_t n, std::size_t K) {
  const auto window = epsilon_window(rule, n, K);
  if (window.lower > window.upper)
    throw TuningError("empty epsilon window [" + std::to_string(window.lower) + ", " +
                      std::to_string(window.upper) + "]: decrease c0 or increase C0");
  return std::sqrt(window.lower * window.upper);
}

Eigen::VectorXd project(const EigenSystem &eig, const Eigen::VectorXd &y, std::size_t K) {
  if (K > eig.count())
    throw InvalidInput("K=" + std::to_string(K) + " exceeds the " + std::to_string(eig.count()) +
                       " computed eigenpairs");
  if (K == 0)
    return Eigen::VectorXd::Zero(y.size());
  const auto k = static_cast<Eigen::Index>(K);
  const auto v = eig.vectors.leftCols(k);
  const Eigen::VectorXd coef = v.transpose() * y / static_cast<double>(y.size());
  return v * coef;
}

RegressionFit fit_on(std::shared_ptr<const EigenSystem> eig, const Eigen::VectorXd &y, std::size_t K,
                     double epsilon, std::size_t component_count) {
  RegressionFit fit;
  fit.K = K;
  fit.epsilon = epsilon;
  fit.component_count = component_count;
  if (K == 0) {
    fit.fitted = Eigen::VectorXd::Zero(y.size());
    fit.projections.resize(0);
    fit.eig = std::move(eig);
    return fit;
  }
  if (!eig)
    throw InvalidInput("fit with K >= 1 needs an eigensystem");
  if (static_cast<std::size_t>(y.size()) != eig->size())
    throw InvalidInput("response length does not match the eigensystem size");
  fit.fitted = project(*eig, y, K);
  fit.projections =
      eig->vectors.leftCols(static_cast<Eigen::Index>(K)).transpose() * y / static_cast<double>(y.size());
  fit.eig = std::move(eig);
  return fit;
}

RegressionFit fit(const SampleSet &samples, std::size_t K, double epsilon, const KernelSpec &kernel,
                  const EigenOptions &options) {
  const auto &y = samples.responses();
  const std::size_t n = samples.size();
  if (K > n)
    throw InvalidInput("K=" + std::to_string(K) + " exceeds n=" + std::to_string(n));
  auto graph = build_graph(samples, epsilon, kernel);
  const auto components = connectivity_check(graph).component_count;
  if (K == 0)
    return fit_on(nullptr, y, 0, epsilon, components);
  const auto op = laplacian(std::move(graph));
  auto eig = std::make_shared<const EigenSystem>(eigensolve(op, K, options));
  return fit_on(std::move(eig), y, K, epsilon, components);
}

GridSearchResult grid_search(const SampleSet &samples, const std::vector<std::size_t> &K_grid,
                             const std::vector<double> &eps_grid, const KernelSpec &kernel,
                             const Eigen::VectorXd &truth, const EigenOptions &options) {
  if (K_grid.empty() || eps_grid.empty())
    throw InvalidInput("grid search needs non-empty K and epsilon grids");
  const std::size_t n = samples.size();
  if (static_cast<std::size_t>(truth.size()) != n)
    throw InvalidInput("truth length does not match the sample count");
  const auto &y = samples.responses();
  const std::size_t k_max = *std::max_element(K_grid.begin(), K_grid.end());
  if (k_max > n)
    throw InvalidInput("K grid contains K=" + std::to_string(k_max) + " > n=" + std::to_string(n));

  GridSearchResult result;
  result.mse_surface.resize(static_cast<Eigen::Index>(eps_grid.size()),
                            static_cast<Eigen::Index>(K_grid.size()));
  auto best_key = std::make_tuple(std::numeric_limits<double>::infinity(), std::size_t{0}, 0.0);

  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    const double eps = eps_grid[e];
    auto graph = build_graph(samples, eps, kernel);
    const auto components = connectivity_check(graph).component_count;
    std::shared_ptr<const EigenSystem> eig;
    Eigen::VectorXd coef;
    if (k_max > 0) {
      const auto op = laplacian(std::move(graph));
      eig = std::make_shared<const EigenSystem>(eigensolve(op, k_max, options));
      coef = eig->coefficients(y);
    }
    // Prefix sums of the projection, one per K value in increasing order.
    std::vector<std::size_t> order(K_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return K_grid[a] < K_grid[b]; });
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::size_t built = 0;
    bool improved_here = false;
    for (std::size_t idx : order) {
      const std::size_t K = K_grid[idx];
      for (; built < K; ++built)
        partial += coef(static_cast<Eigen::Index>(built)) * eig->vectors.col(static_cast<Eigen::Index>(built));
      const double mse = norm_n_sq(partial - truth);
      result.mse_surface(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(idx)) = mse;
      const auto key = std::make_tuple(mse, K, eps);
      if (key < best_key) {
        best_key = key;
        improved_here = true;
      }
    }
    for (std::size_t idx = 0; idx < K_grid.size(); ++idx)
      result.cells.push_back({K_grid[idx], eps,
                              result.mse_surface(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(idx))});
    if (improved_here) {
      result.best_eig = eig;
      result.best_component_count = components;
    }
  }
  result.best_mse = std::get<0>(best_key);
  result.best_K = std::get<1>(best_key);
  result.best_epsilon = std::get<2>(best_key);
  return result;
}

BiasVariance bias_variance_decompose(const RegressionFit &fit, const Eigen::VectorXd &truth) {
  if (truth.size() != fit.fitted.size())
    throw InvalidInput("truth length does not match the fit");
  Eigen::VectorXd projected = Eigen::VectorXd::Zero(truth.size());
  if (fit.K > 0)
    projected = project(*fit.eig, truth, fit.K);
  return {norm_n_sq(truth - projected), norm_n_sq(fit.fitted - projected)};
}

} // namespace pcrfle
