#pragma once

#include "pcrfle/kernel.hpp"
#include "pcrfle/kernels/types.hpp"
#include "pcrfle/sample_set.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <vector>

namespace pcrfle {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Epsilon-neighborhood graph with kernel weights. Symmetric, zero diagonal,
/// immutable after construction.
class NeighborGraph {
public:
  NeighborGraph(std::size_t dim, double epsilon, SparseRowMatrix weights);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t dim() const { return dim_; }
  double epsilon() const { return epsilon_; }
  const SparseRowMatrix &weights() const { return weights_; }
  const Eigen::VectorXd &degree() const { return degree_; }
  /// Number of undirected edges.
  std::size_t edge_count() const { return static_cast<std::size_t>(weights_.nonZeros()) / 2; }

  kernels::CsrView csr() const;

private:
  std::size_t dim_;
  double epsilon_;
  SparseRowMatrix weights_;
  Eigen::VectorXd degree_;
};

enum class NeighborSearch { automatic, all_pairs, grid };

/// Above this size the automatic search uses the grid index.
inline constexpr std::size_t all_pairs_limit = 512;

/// Throws InvalidInput when epsilon <= 0.
NeighborGraph build_graph(const SampleSet &samples, double epsilon, const KernelSpec &kernel,
                          NeighborSearch search = NeighborSearch::automatic);

/// Assembles a graph from an explicit undirected edge list (i != j).
NeighborGraph graph_from_edges(std::size_t n, std::size_t dim, double epsilon,
                               const std::vector<kernels::Edge> &edges);

struct Connectivity {
  bool connected = false;
  std::size_t component_count = 0;
  /// Component id per vertex, ids numbered by first appearance.
  std::vector<std::size_t> labels;
};

/// Union-find over positive-weight edges.
Connectivity connectivity_check(const NeighborGraph &graph);

} // namespace pcrfle
