#pragma once

#include "pcrfle/spectral.hpp"
#include "pcrfle/test_functions.hpp"

#include <cstddef>
#include <vector>

namespace pcrfle {

struct QuadratureOptions {
  int min_level = 4;
  int max_level = 12;
  /// Convergence when the extrapolated values agree to this relative error.
  double relative_tolerance = 1e-3;
  /// Divergence when this many successive increments fail to shrink.
  int divergence_run = 3;
};

struct SeminormResult {
  double s = 0.0;
  /// Double integral |u|_{H^s}^2 (extrapolated); +inf when divergent.
  double squared = 0.0;
  bool converged = false;
  bool divergent = false;
  std::size_t quadrature_cells = 0;
  double estimated_error = 0.0;
  std::vector<int> levels;
  /// Raw midpoint sums per level.
  std::vector<double> refinements;
  /// Extrapolated values per level.
  std::vector<double> extrapolated;

  double seminorm() const;
};

/// Midpoint sum over the off-diagonal cells of a 2^level x 2^level grid on
/// [lower, upper]^2 of |u(x) - u(y)|^2 / |x - y|^(1 + 2s).
double quadrature_level_sum(const TestFunction &fn, double s, int level);

/// Refinement sequence of quadrature_level_sum with geometric (Aitken)
/// extrapolation of the excluded diagonal band. Divergence is a result.
SeminormResult continuum_seminorm(const TestFunction &fn, double s, const QuadratureOptions &options = {});

/// sum_i lambda_i^s <f, v_i>_n^2 over the computed pairs; s in (0, 1].
double spectral_seminorm(const EigenSystem &eig, const Eigen::VectorXd &f_values, double s);

} // namespace pcrfle
