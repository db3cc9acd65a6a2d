#pragma once

#include <cstddef>
#include <vector>

namespace pcrfle::kernels {

/// Upper-triangle edge (i < j) with its kernel weight.
struct Edge {
  std::size_t i;
  std::size_t j;
  double w;

  bool operator==(const Edge &) const = default;
};

/// Compressed sparse rows; a view over storage owned elsewhere.
struct CsrView {
  std::size_t rows = 0;
  const int *outer = nullptr;
  const int *inner = nullptr;
  const double *values = nullptr;
};

/// Edges lighter than this are never stored.
inline constexpr double min_edge_weight = 1e-14;

} // namespace pcrfle::kernels
