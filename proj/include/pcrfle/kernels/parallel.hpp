#pragma once

// OpenMP kernels. Work is split by rows and partial results are combined in
// row order, so the output does not depend on the thread count.

#include "pcrfle/kernel.hpp"
#include "pcrfle/kernels/types.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pcrfle::kernels::omp {

/// All-pairs epsilon scan, rows distributed over threads.
std::vector<Edge> epsilon_edges(const Eigen::MatrixXd &points, double epsilon,
                                const KernelSpec &kernel);

/// Uniform-grid spatial index with cell side epsilon. Same output as the
/// all-pairs scan.
std::vector<Edge> epsilon_edges_grid(const Eigen::MatrixXd &points, double epsilon,
                                     const KernelSpec &kernel);

void laplacian_apply(const CsrView &weights, std::span<const double> degree, double scale,
                     std::span<const double> u, std::span<double> y);

double pair_energy(std::span<const double> u, std::span<const double> table);

/// Threads used by parallel regions started from here on.
void set_thread_count(int threads);
int thread_count();

} // namespace pcrfle::kernels::omp
