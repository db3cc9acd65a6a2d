#pragma once

// Helpers shared by the unit and acceptance tests.

#include "pcrfle/graph.hpp"
#include "pcrfle/sample_set.hpp"
#include "pcrfle/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

namespace pcrfle::testing {

inline SampleSet random_cloud(std::size_t n, std::size_t d, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, hi);
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p.data()[i] = u(rng);
  return SampleSet(p);
}

inline Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = normal(rng);
  return v;
}

/// Sine of the largest principal angle between the column spans of a and b
/// (same shape, columns need not be normalized).
inline double subspace_sine(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd rest = qb - qa * (qa.transpose() * qb);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(rest).singularValues()(0);
}

/// Largest principal angle over eigenvalue clusters (values of `ref` closer
/// than `gap` are grouped). `ref` may hold more pairs than `b`: a cluster
/// that `b` cuts off at its last column is then checked for containment in
/// the complete eigenspace, since any basis of the cut part is valid.
inline double worst_cluster_angle(const EigenSystem &ref, const EigenSystem &b, double gap) {
  const Eigen::Index m = b.values.size();
  const Eigen::Index total = ref.values.size();
  double worst = 0.0;
  Eigen::Index start = 0;
  while (start < m) {
    Eigen::Index end = start + 1;
    while (end < total && ref.values(end) - ref.values(end - 1) < gap)
      ++end;
    const auto sine = subspace_sine(ref.vectors.middleCols(start, end - start),
                                    b.vectors.middleCols(start, std::min(end, m) - start));
    worst = std::max(worst, std::asin(std::min(1.0, sine)));
    start = end;
  }
  return worst;
}

} // namespace pcrfle::testing
