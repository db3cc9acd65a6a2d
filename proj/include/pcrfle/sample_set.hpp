#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace pcrfle {

/// Design points (one per row) with optional responses.
class SampleSet {
public:
  SampleSet() = default;

  /// Throws InvalidInput when n < 2 or responses have the wrong length.
  explicit SampleSet(Eigen::MatrixXd points,
                     std::optional<Eigen::VectorXd> responses = std::nullopt);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

  const Eigen::MatrixXd &points() const { return points_; }
  auto point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }

  bool has_responses() const { return responses_.has_value(); }
  /// Throws InvalidInput if the set carries no responses.
  const Eigen::VectorXd &responses() const;

  /// Builds from ragged input; every row must have the same length.
  static SampleSet from_rows(const std::vector<std::vector<double>> &rows,
                             std::optional<std::vector<double>> responses = std::nullopt);

  SampleSet with_responses(Eigen::VectorXd responses) const;

private:
  Eigen::MatrixXd points_;
  std::optional<Eigen::VectorXd> responses_;
};

} // namespace pcrfle
