#pragma once

#include <optional>
#include <string>

#include "ksd/types.hpp"

namespace ksd {

/// f(s), f'(s), f''(s) for a radial profile evaluated at s = |x - y|^2.
struct Profile {
  double f;
  double d1;
  /// For profiles whose f'' is singular at s = 0 (Matern 3/2), the whole
  /// triple takes its diagonal limit within the near-diagonal cutoff, with
  /// d2 = 0: it only ever enters multiplied by (x_j - y_j)^2, and that
  /// product vanishes in the limit.
  double d2;
};

/// Radial base kernel k(x, y) = f(|x - y|^2) with analytic profile derivatives.
///
/// A small value type: kind plus parameters. Every method is pure.
class RadialKernel {
 public:
  enum class Kind { kImq, kGaussian, kMatern32 };

  /// (c^2 + s)^beta with beta in (-1, 0).
  static RadialKernel imq(double c = 1.0, double beta = -0.5);
  /// (1 + s / h)^beta, the bandwidth form used for sample reweighting.
  /// Equal to h^{-beta} times imq(sqrt(h), beta).
  static RadialKernel imq_bandwidth(double h, double beta = -0.5);
  /// exp(-s / h).
  static RadialKernel gaussian(double h);
  /// (1 + sqrt(3) r) exp(-sqrt(3) r), r = sqrt(s).
  static RadialKernel matern32();

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] double bandwidth() const { return h_; }
  /// Multiplicative constant on the IMQ profile (1 unless built by imq_bandwidth).
  [[nodiscard]] double amplitude() const { return amplitude_; }

  /// Profile triple at s >= 0.
  [[nodiscard]] Profile profile(double s) const;

  [[nodiscard]] double eval(const Vector& x, const Vector& y) const;
  /// d/dx_j k(x, y) = 2 (x_j - y_j) f'(s).
  [[nodiscard]] double grad_x_coord(int j, const Vector& x, const Vector& y) const;
  /// d/dy_j k(x, y) = -d/dx_j k(x, y).
  [[nodiscard]] double grad_y_coord(int j, const Vector& x, const Vector& y) const;
  /// d/dx_j d/dy_j k(x, y) = -2 f'(s) - 4 (x_j - y_j)^2 f''(s).
  [[nodiscard]] double cross_coord(int j, const Vector& x, const Vector& y) const;

  /// JSON description of kind and parameters.
  [[nodiscard]] std::string spec_json() const;

  /// Below this distance the Matern 3/2 profile uses its diagonal limit.
  static constexpr double kMaternDiagonalCutoff = 1e-9;

 private:
  RadialKernel(Kind kind, double c, double beta, double h, double amplitude);

  Kind kind_;
  double c_ = 1.0;
  double beta_ = -0.5;
  double h_ = 1.0;
  double amplitude_ = 1.0;
};

/// Median of the n(n-1)/2 pairwise squared distances between rows.
/// For an even number of pairs, the mean of the two central order statistics.
double median_bandwidth(const PointMatrix& points);

}  // namespace ksd

namespace ksd {

/// A kernel description whose bandwidth may be resolved from data.
///
/// For Gaussian kernels, median=true (or a missing h) picks h by
/// median_bandwidth. For IMQ kernels, setting h or median selects the
/// bandwidth form (1 + s/h)^beta.
struct KernelSpec {
  RadialKernel::Kind kind = RadialKernel::Kind::kImq;
  double c = 1.0;
  double beta = -0.5;
  std::optional<double> h;
  bool median = false;

  [[nodiscard]] bool needs_points() const;
  /// Builds the kernel; points are consulted only for median bandwidths.
  [[nodiscard]] RadialKernel resolve(const PointMatrix& points) const;
  /// Builds the kernel without data. Throws ArgumentError if a median is requested.
  [[nodiscard]] RadialKernel resolve() const;
  /// Short human-readable label such as "imq(c=1,beta=-0.5)" or "gaussian(h=median)".
  [[nodiscard]] std::string label() const;
};

}  // namespace ksd
