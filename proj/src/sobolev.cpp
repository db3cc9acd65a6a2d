#include "pcrfle/sobolev.hpp"

#include "pcrfle/errors.hpp"
#include "pcrfle/kernels/parallel.hpp"

#include <cmath>
#include <limits>

namespace pcrfle {

double SeminormResult::seminorm() const {
  return divergent ? std::numeric_limits<double>::infinity() : std::sqrt(std::max(squared, 0.0));
}

double quadrature_level_sum(const TestFunction &fn, double s, int level) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("s must lie in (0,1)");
  if (level < 1 || level > 16)
    throw InvalidInput("quadrature level must lie in [1, 16]");
  const std::size_t cells = std::size_t{1} << level;
  const double h = (fn.upper() - fn.lower()) / static_cast<double>(cells);
  std::vector<double> u(cells);
  for (std::size_t i = 0; i < cells; ++i)
    u[i] = fn(fn.lower() + (static_cast<double>(i) + 0.5) * h);
  std::vector<double> table(cells, 0.0);
  for (std::size_t m = 1; m < cells; ++m)
    table[m] = std::pow(static_cast<double>(m) * h, -(1.0 + 2.0 * s)) * h * h;
  return kernels::omp::pair_energy(u, table);
}

SeminormResult continuum_seminorm(const TestFunction &fn, double s, const QuadratureOptions &opt) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("s must lie in (0,1)");
  if (opt.min_level < 1 || opt.max_level < opt.min_level + 2)
    throw InvalidInput("quadrature needs at least three refinement levels");

  SeminormResult res;
  res.s = s;
  int growing_run = 0;
  for (int level = opt.min_level; level <= opt.max_level; ++level) {
    const double sum = quadrature_level_sum(fn, s, level);
    res.levels.push_back(level);
    res.refinements.push_back(sum);
    res.quadrature_cells = (std::size_t{1} << level) * (std::size_t{1} << level);

    const std::size_t k = res.refinements.size();
    double extrapolated = sum;
    if (k >= 3) {
      const double d1 = res.refinements[k - 2] - res.refinements[k - 3];
      const double d2 = sum - res.refinements[k - 2];
      if (d1 != 0.0) {
        const double ratio = d2 / d1;
        if (d2 > 0.0 && ratio >= 1.0)
          ++growing_run;
        else
          growing_run = 0;
        if (std::abs(ratio) < 1.0)
          extrapolated = sum + d2 * ratio / (1.0 - ratio);
      }
    }
    res.extrapolated.push_back(extrapolated);

    if (growing_run >= opt.divergence_run) {
      res.divergent = true;
      res.squared = std::numeric_limits<double>::infinity();
      res.estimated_error = std::numeric_limits<double>::infinity();
      return res;
    }
  }

  const std::size_t k = res.extrapolated.size();
  res.squared = res.extrapolated.back();
  res.estimated_error = std::abs(res.extrapolated[k - 1] - res.extrapolated[k - 2]);
  const double scale = std::max(std::abs(res.squared), std::numeric_limits<double>::min());
  const bool all_zero = res.refinements.back() == 0.0 && res.refinements[k - 2] == 0.0;
  res.converged = all_zero || res.estimated_error <= opt.relative_tolerance * scale;
  return res;
}

double spectral_seminorm(const EigenSystem &eig, const Eigen::VectorXd &f_values, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw InvalidInput("s must lie in (0,1]");
  const Eigen::VectorXd coef = eig.coefficients(f_values);
  double total = 0.0;
  for (Eigen::Index k = 0; k < coef.size(); ++k) {
    const double lambda = std::max(eig.values(k), 0.0);
    total += std::pow(lambda, s) * coef(k) * coef(k);
  }
  return total;
}

} // namespace pcrfle
