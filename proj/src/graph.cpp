#include "pcrfle/graph.hpp"

#include "pcrfle/errors.hpp"
#include "pcrfle/kernels/parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace pcrfle {

NeighborGraph::NeighborGraph(std::size_t dim, double epsilon, SparseRowMatrix weights)
    : dim_(dim), epsilon_(epsilon), weights_(std::move(weights)) {
  weights_.makeCompressed();
  degree_ = Eigen::VectorXd::Zero(weights_.rows());
  for (Eigen::Index i = 0; i < weights_.outerSize(); ++i)
    for (SparseRowMatrix::InnerIterator it(weights_, i); it; ++it)
      degree_(i) += it.value();
}

kernels::CsrView NeighborGraph::csr() const {
  return {size(), weights_.outerIndexPtr(), weights_.innerIndexPtr(), weights_.valuePtr()};
}

NeighborGraph graph_from_edges(std::size_t n, std::size_t dim, double epsilon,
                               const std::vector<kernels::Edge> &edges) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const auto &e : edges) {
    if (e.i == e.j || e.i >= n || e.j >= n)
      throw InvalidInput("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                         ") is a self-loop or out of range");
    triplets.emplace_back(static_cast<int>(e.i), static_cast<int>(e.j), e.w);
    triplets.emplace_back(static_cast<int>(e.j), static_cast<int>(e.i), e.w);
  }
  SparseRowMatrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  w.setFromTriplets(triplets.begin(), triplets.end());
  return NeighborGraph(dim, epsilon, std::move(w));
}

NeighborGraph build_graph(const SampleSet &samples, double epsilon, const KernelSpec &kernel,
                          NeighborSearch search) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidInput("epsilon must be positive and finite");
  if (samples.size() < 2)
    throw InvalidInput("graph needs at least 2 points");

  if (search == NeighborSearch::automatic)
    search = (samples.size() > all_pairs_limit && samples.dim() <= 6) ? NeighborSearch::grid
                                                                       : NeighborSearch::all_pairs;
  const auto edges = search == NeighborSearch::grid
                         ? kernels::omp::epsilon_edges_grid(samples.points(), epsilon, kernel)
                         : kernels::omp::epsilon_edges(samples.points(), epsilon, kernel);
  return graph_from_edges(samples.size(), samples.dim(), epsilon, edges);
}

Connectivity connectivity_check(const NeighborGraph &graph) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const auto &w = graph.weights();
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(w, i); it; ++it) {
      if (it.value() <= 0.0)
        continue;
      const auto a = find(static_cast<std::size_t>(i));
      const auto b = find(static_cast<std::size_t>(it.col()));
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b);
    }
  }

  Connectivity result;
  result.labels.assign(n, 0);
  std::vector<std::size_t> id_of_root(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto root = find(v);
    if (id_of_root[root] == n)
      id_of_root[root] = result.component_count++;
    result.labels[v] = id_of_root[root];
  }
  result.connected = result.component_count == 1;
  return result;
}

} // namespace pcrfle
