#pragma once

#include "pcrfle/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <span>

namespace pcrfle {

/// Empirical inner product <u, v>_n = u.v / n.
inline double inner_n(const Eigen::VectorXd &u, const Eigen::VectorXd &v) {
  return u.dot(v) / static_cast<double>(u.size());
}
inline double norm_n_sq(const Eigen::VectorXd &u) { return inner_n(u, u); }

/// Scaled unnormalized graph Laplacian (D - W) / (n eps^(d+2)).
class LaplacianOperator {
public:
  explicit LaplacianOperator(NeighborGraph graph);

  std::size_t size() const { return graph_.size(); }
  double scale() const { return scale_; }
  const NeighborGraph &graph() const { return graph_; }

  void apply(std::span<const double> u, std::span<double> y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd &u) const;

  /// Scaled (D - W) as a sparse column-major matrix.
  Eigen::SparseMatrix<double> sparse() const;
  Eigen::MatrixXd dense() const;

  /// Gershgorin bound on the largest eigenvalue.
  double norm_bound() const;

private:
  NeighborGraph graph_;
  double scale_;
};

LaplacianOperator laplacian(NeighborGraph graph);

/// <L u, u>_n from the edge sum (1 / (2 n^2 eps^(d+2))) sum_ij w_ij (u_i - u_j)^2.
double dirichlet_form(const LaplacianOperator &op, const Eigen::VectorXd &u);

enum class EigenMethod { automatic, dense, iterative };

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  /// Target residual |L v - lambda v| for unit-norm v. Raised to the
  /// floating-point floor when the operator norm makes it unreachable.
  double tolerance = 1e-10;
  std::size_t block_size = 4;
  /// Components up to this size are solved densely inside the iterative path.
  std::size_t dense_component_limit = 32;
  std::size_t max_restarts = 60;
  unsigned long long seed = 0x5eed;
};

/// Leading eigenpairs in ascending order; vectors normalized so that
/// |v_i|_n = 1. Immutable after construction.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors; ///< n x m, one pair per column
  double max_residual = 0.0;
  EigenMethod method = EigenMethod::dense;

  std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(values.size()); }
  bool complete() const { return count() == size(); }

  /// <u, v_k>_n for k < count().
  Eigen::VectorXd coefficients(const Eigen::VectorXd &u) const;
};

/// Dense solver when n <= 512 or m >= n/2, otherwise block Krylov-Schur on the
/// shift-inverted Laplacian, one connected component at a time.
/// Throws InvalidInput for m outside [1, n] and SolverError on non-convergence.
EigenSystem eigensolve(const LaplacianOperator &op, std::size_t m, const EigenOptions &options = {});

/// Size threshold between dense and iterative solvers.
inline constexpr std::size_t dense_solver_limit = 512;

/// sum_i lambda_i^s <u, v_i>_n v_i. Requires 0 < s < 1 and either a complete
/// system or u inside the computed span.
Eigen::VectorXd fractional_apply(const EigenSystem &eig, double s, const Eigen::VectorXd &u);

/// Largest-magnitude entry made positive, first index on ties.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v);

} // namespace pcrfle
