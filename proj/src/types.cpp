#include "ksd/types.hpp"

#include <cmath>

#include "ksd/errors.hpp"

namespace ksd {

namespace {

void check_points(const PointMatrix& points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw ArgumentError("sample needs at least one point of dimension >= 1");
  }
  if (!points.allFinite()) throw ArgumentError("sample contains non-finite coordinates");
}

}  // namespace

Sample::Sample(PointMatrix points) : points_(std::move(points)) {
  check_points(points_);
  weights_ = Vector::Constant(points_.rows(), 1.0 / static_cast<double>(points_.rows()));
}

Sample::Sample(PointMatrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  check_points(points_);
  if (weights_.size() != points_.rows()) {
    throw ArgumentError("weight count " + std::to_string(weights_.size()) +
                        " does not match point count " + std::to_string(points_.rows()));
  }
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw ArgumentError("weights must be finite and nonnegative");
  }
  const double total = weights_.sum();
  if (!(total > 0.0)) throw ArgumentError("weights sum to zero");
  weight_correction_ = std::abs(total - 1.0);
  weights_ /= total;
}

bool Sample::has_uniform_weights() const {
  const double u = 1.0 / static_cast<double>(size());
  return (weights_.array() == u).all();
}

Sample Sample::head(Eigen::Index m) const {
  if (m < 1 || m > size()) throw ArgumentError("head size out of range");
  return Sample(PointMatrix(points_.topRows(m)));
}

}  // namespace ksd
