#include "pcrfle/kernels/reference.hpp"

#include <cmath>

namespace pcrfle::kernels::reference {

std::vector<Edge> epsilon_edges(const Eigen::MatrixXd &points, double epsilon,
                                const KernelSpec &kernel) {
  std::vector<Edge> edges;
  const auto n = static_cast<std::size_t>(points.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = (points.row(static_cast<Eigen::Index>(i)) -
                           points.row(static_cast<Eigen::Index>(j)))
                              .norm();
      if (dist > epsilon)
        continue;
      const double w = kernel(dist / epsilon);
      if (w >= min_edge_weight)
        edges.push_back({i, j, w});
    }
  }
  return edges;
}

void laplacian_apply(const CsrView &weights, std::span<const double> degree, double scale,
                     std::span<const double> u, std::span<double> y) {
  for (std::size_t i = 0; i < weights.rows; ++i) {
    double acc = degree[i] * u[i];
    for (int k = weights.outer[i]; k < weights.outer[i + 1]; ++k)
      acc -= weights.values[k] * u[static_cast<std::size_t>(weights.inner[k])];
    y[i] = scale * acc;
  }
}

double pair_energy(std::span<const double> u, std::span<const double> table) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const double diff = u[i] - u[j];
      row += diff * diff * table[j - i];
    }
    total += row;
  }
  return 2.0 * total;
}

} // namespace pcrfle::kernels::reference
