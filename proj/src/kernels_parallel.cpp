#include "pcrfle/kernels/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace pcrfle::kernels::omp {

namespace {

std::vector<Edge> concat(std::vector<std::vector<Edge>> &rows) {
  std::size_t total = 0;
  for (const auto &r : rows)
    total += r.size();
  std::vector<Edge> edges;
  edges.reserve(total);
  for (auto &r : rows)
    edges.insert(edges.end(), r.begin(), r.end());
  return edges;
}

inline double pair_distance(const Eigen::MatrixXd &points, std::size_t i, std::size_t j) {
  return (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j)))
      .norm();
}

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t> &key) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto c : key) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

} // namespace

std::vector<Edge> epsilon_edges(const Eigen::MatrixXd &points, double epsilon,
                                const KernelSpec &kernel) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<std::vector<Edge>> rows(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = pair_distance(points, i, j);
      if (dist > epsilon)
        continue;
      const double w = kernel(dist / epsilon);
      if (w >= min_edge_weight)
        rows[i].push_back({i, j, w});
    }
  }
  return concat(rows);
}

std::vector<Edge> epsilon_edges_grid(const Eigen::MatrixXd &points, double epsilon,
                                     const KernelSpec &kernel) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  const Eigen::RowVectorXd origin = points.colwise().minCoeff();

  auto cell_of = [&](std::size_t i) {
    std::vector<std::int64_t> key(d);
    for (std::size_t k = 0; k < d; ++k)
      key[k] = static_cast<std::int64_t>(
          std::floor((points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) -
                      origin(static_cast<Eigen::Index>(k))) /
                     epsilon));
    return key;
  };

  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellHash> cells;
  std::vector<std::vector<std::int64_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = cell_of(i);
    cells[keys[i]].push_back(i);
  }

  // Offsets {-1, 0, 1}^d.
  std::size_t n_offsets = 1;
  for (std::size_t k = 0; k < d; ++k)
    n_offsets *= 3;

  std::vector<std::vector<Edge>> rows(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<std::int64_t> probe(d);
    auto &row = rows[i];
    for (std::size_t code = 0; code < n_offsets; ++code) {
      std::size_t c = code;
      for (std::size_t k = 0; k < d; ++k) {
        probe[k] = keys[i][k] + static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
      }
      const auto it = cells.find(probe);
      if (it == cells.end())
        continue;
      for (std::size_t j : it->second) {
        if (j <= i)
          continue;
        const double dist = pair_distance(points, i, j);
        if (dist > epsilon)
          continue;
        const double w = kernel(dist / epsilon);
        if (w >= min_edge_weight)
          row.push_back({i, j, w});
      }
    }
    std::sort(row.begin(), row.end(), [](const Edge &a, const Edge &b) { return a.j < b.j; });
  }
  return concat(rows);
}

void laplacian_apply(const CsrView &weights, std::span<const double> degree, double scale,
                     std::span<const double> u, std::span<double> y) {
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(weights.rows); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double acc = degree[i] * u[i];
    for (int k = weights.outer[i]; k < weights.outer[i + 1]; ++k)
      acc -= weights.values[k] * u[static_cast<std::size_t>(weights.inner[k])];
    y[i] = scale * acc;
  }
}

double pair_energy(std::span<const double> u, std::span<const double> table) {
  const std::size_t n = u.size();
  std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = u[i] - u[j];
      row += diff * diff * table[j - i];
    }
    partial[i] = row;
  }
  double total = 0.0;
  for (double p : partial)
    total += p;
  return 2.0 * total;
}

void set_thread_count(int threads) {
  if (threads > 0)
    omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

} // namespace pcrfle::kernels::omp
