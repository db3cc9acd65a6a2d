#pragma once

// Serial reference implementations. They define the expected output of the
// OpenMP kernels in parallel.hpp and are kept for tests and benchmarks.

#include "pcrfle/kernel.hpp"
#include "pcrfle/kernels/types.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pcrfle::kernels::reference {

/// All-pairs epsilon scan, O(n^2). Edges sorted by (i, j).
std::vector<Edge> epsilon_edges(const Eigen::MatrixXd &points, double epsilon,
                                const KernelSpec &kernel);

/// y = scale * (D - W) u.
void laplacian_apply(const CsrView &weights, std::span<const double> degree, double scale,
                     std::span<const double> u, std::span<double> y);

/// sum_{i != j} (u_i - u_j)^2 * table[|i - j|] over a uniform 1-D grid;
/// table[0] is ignored.
double pair_energy(std::span<const double> u, std::span<const double> table);

} // namespace pcrfle::kernels::reference
