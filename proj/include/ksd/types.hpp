#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace ksd {

/// Row-major so each sample point is a contiguous row.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// A weighted point set Q_n = sum_i q_i delta_{x_i}.
///
/// Weights are normalized on construction; the size of the applied
/// correction |sum(q) - 1| is kept in weight_correction().
class Sample {
 public:
  Sample() = default;

  /// Uniform weights 1/n.
  explicit Sample(PointMatrix points);

  /// Explicit nonnegative weights; rescaled to sum to one.
  Sample(PointMatrix points, Vector weights);

  [[nodiscard]] const PointMatrix& points() const { return points_; }
  [[nodiscard]] const Vector& weights() const { return weights_; }
  [[nodiscard]] Eigen::Index size() const { return points_.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return points_.cols(); }
  [[nodiscard]] double weight_correction() const { return weight_correction_; }

  /// True when every weight equals 1/n exactly.
  [[nodiscard]] bool has_uniform_weights() const;

  /// First m points, reweighted uniformly. Used for growing-n sweeps.
  [[nodiscard]] Sample head(Eigen::Index m) const;

 private:
  PointMatrix points_;
  Vector weights_;
  double weight_correction_ = 0.0;
};

}  // namespace ksd
