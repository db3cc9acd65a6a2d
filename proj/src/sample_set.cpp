#include "pcrfle/sample_set.hpp"

#include "pcrfle/errors.hpp"

#include <string>

namespace pcrfle {

SampleSet::SampleSet(Eigen::MatrixXd points, std::optional<Eigen::VectorXd> responses)
    : points_(std::move(points)), responses_(std::move(responses)) {
  if (points_.rows() < 2)
    throw InvalidInput("sample set needs at least 2 points, got " +
                       std::to_string(points_.rows()));
  if (points_.cols() < 1)
    throw InvalidInput("sample set dimension must be at least 1");
  if (responses_ && responses_->size() != points_.rows())
    throw InvalidInput("responses have length " + std::to_string(responses_->size()) +
                       " but there are " + std::to_string(points_.rows()) + " points");
}

const Eigen::VectorXd &SampleSet::responses() const {
  if (!responses_)
    throw InvalidInput("sample set has no responses");
  return *responses_;
}

SampleSet SampleSet::from_rows(const std::vector<std::vector<double>> &rows,
                               std::optional<std::vector<double>> responses) {
  if (rows.empty())
    throw InvalidInput("sample set is empty");
  const std::size_t d = rows.front().size();
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d)
      throw InvalidInput("point " + std::to_string(i) + " has dimension " +
                         std::to_string(rows[i].size()) + ", expected " + std::to_string(d));
    for (std::size_t k = 0; k < d; ++k)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  std::optional<Eigen::VectorXd> y;
  if (responses)
    y = Eigen::Map<const Eigen::VectorXd>(responses->data(),
                                          static_cast<Eigen::Index>(responses->size()));
  return SampleSet(std::move(points), std::move(y));
}

SampleSet SampleSet::with_responses(Eigen::VectorXd responses) const {
  return SampleSet(points_, std::move(responses));
}

} // namespace pcrfle
