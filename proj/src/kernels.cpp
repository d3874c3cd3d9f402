#include "ksd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ksd/errors.hpp"

namespace ksd {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void check_pair(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw ArgumentError("kernel arguments have dimensions " + std::to_string(x.size()) + " and " +
                        std::to_string(y.size()));
  }
}

void check_coord(int j, const Vector& x) {
  if (j < 0 || j >= x.size()) throw ArgumentError("coordinate index out of range");
}

}  // namespace

RadialKernel::RadialKernel(Kind kind, double c, double beta, double h, double amplitude)
    : kind_(kind), c_(c), beta_(beta), h_(h), amplitude_(amplitude) {}

RadialKernel RadialKernel::imq(double c, double beta) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("IMQ c must be positive");
  // beta <= -1 loses tightness control; beta >= 0 is not a decaying kernel.
  if (!(beta > -1.0 && beta < 0.0)) throw ArgumentError("IMQ beta must lie in (-1, 0)");
  return {Kind::kImq, c, beta, 1.0, 1.0};
}

RadialKernel RadialKernel::imq_bandwidth(double h, double beta) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("IMQ bandwidth must be positive");
  RadialKernel k = imq(std::sqrt(h), beta);
  k.h_ = h;
  k.amplitude_ = std::pow(h, -beta);
  return k;
}

RadialKernel RadialKernel::gaussian(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("Gaussian bandwidth must be positive");
  return {Kind::kGaussian, 1.0, 0.0, h, 1.0};
}

RadialKernel RadialKernel::matern32() { return {Kind::kMatern32, 1.0, 0.0, 1.0, 1.0}; }

std::string RadialKernel::name() const {
  switch (kind_) {
    case Kind::kImq:
      return "imq";
    case Kind::kGaussian:
      return "gaussian";
    case Kind::kMatern32:
      return "matern32";
  }
  return "unknown";
}

std::string RadialKernel::spec_json() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::kImq:
      out << R"({"kind":"imq","c":)" << c_ << R"(,"beta":)" << beta_;
      if (amplitude_ != 1.0) out << R"(,"h":)" << h_;
      out << "}";
      break;
    case Kind::kGaussian:
      out << R"({"kind":"gaussian","h":)" << h_ << "}";
      break;
    case Kind::kMatern32:
      out << R"({"kind":"matern32"})";
      break;
  }
  return out.str();
}

Profile RadialKernel::profile(double s) const {
  switch (kind_) {
    case Kind::kImq: {
      const double base = c_ * c_ + s;
      // The default exponent gets a sqrt fast path; it dominates every experiment.
      const double f = amplitude_ * (beta_ == -0.5 ? 1.0 / std::sqrt(base) : std::pow(base, beta_));
      const double d1 = beta_ * f / base;
      const double d2 = (beta_ - 1.0) * d1 / base;
      return {f, d1, d2};
    }
    case Kind::kGaussian: {
      const double f = std::exp(-s / h_);
      return {f, -f / h_, f / (h_ * h_)};
    }
    case Kind::kMatern32: {
      const double r = std::sqrt(s);
      if (r < kMaternDiagonalCutoff) return {1.0, -1.5, 0.0};
      const double e = std::exp(-kSqrt3 * r);
      return {(1.0 + kSqrt3 * r) * e, -1.5 * e, (3.0 * kSqrt3 / (4.0 * r)) * e};
    }
  }
  return {0.0, 0.0, 0.0};
}

double RadialKernel::eval(const Vector& x, const Vector& y) const {
  check_pair(x, y);
  return profile((x - y).squaredNorm()).f;
}

double RadialKernel::grad_x_coord(int j, const Vector& x, const Vector& y) const {
  check_pair(x, y);
  check_coord(j, x);
  const double u = x[j] - y[j];
  return 2.0 * u * profile((x - y).squaredNorm()).d1;
}

double RadialKernel::grad_y_coord(int j, const Vector& x, const Vector& y) const {
  return -grad_x_coord(j, x, y);
}

double RadialKernel::cross_coord(int j, const Vector& x, const Vector& y) const {
  check_pair(x, y);
  check_coord(j, x);
  const double u = x[j] - y[j];
  const Profile p = profile((x - y).squaredNorm());
  return -2.0 * p.d1 - 4.0 * u * u * p.d2;
}

double median_bandwidth(const PointMatrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw ArgumentError("median heuristic needs at least two points");
  std::vector<double> sq;
  sq.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) sq.push_back((points.row(i) - points.row(k)).squaredNorm());
  }
  const std::size_t m = sq.size();
  const auto upper = sq.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(sq.begin(), upper, sq.end());
  double median = *upper;
  if (m % 2 == 0) {
    const double lower = *std::max_element(sq.begin(), upper);
    median = 0.5 * (lower + median);
  }
  if (median <= 0.0) {
    throw DegenerateInputError("median pairwise squared distance is zero");
  }
  return median;
}

}  // namespace ksd

namespace ksd {

bool KernelSpec::needs_points() const {
  if (median) return true;
  return kind == RadialKernel::Kind::kGaussian && !h.has_value();
}

RadialKernel KernelSpec::resolve(const PointMatrix& points) const {
  if (!needs_points()) return resolve();
  const double bandwidth = median_bandwidth(points);
  switch (kind) {
    case RadialKernel::Kind::kImq:
      return RadialKernel::imq_bandwidth(bandwidth, beta);
    case RadialKernel::Kind::kGaussian:
      return RadialKernel::gaussian(bandwidth);
    case RadialKernel::Kind::kMatern32:
      break;
  }
  return RadialKernel::matern32();
}

RadialKernel KernelSpec::resolve() const {
  if (needs_points()) throw ArgumentError("median bandwidth requires a sample");
  switch (kind) {
    case RadialKernel::Kind::kImq:
      return h ? RadialKernel::imq_bandwidth(*h, beta) : RadialKernel::imq(c, beta);
    case RadialKernel::Kind::kGaussian:
      return RadialKernel::gaussian(*h);
    case RadialKernel::Kind::kMatern32:
      return RadialKernel::matern32();
  }
  return RadialKernel::matern32();
}

std::string KernelSpec::label() const {
  std::ostringstream out;
  out.precision(17);
  
  switch (kind) {
    case RadialKernel::Kind::kImq:
      out << "imq(";
      if (median || h) {
        if (median) {
          out << "h=median";
        } else {
          out << "h=" << *h;
        }
      } else {
        out << "c=" << c;
      }
      out << ",beta=" << beta << ")";
      break;
    case RadialKernel::Kind::kGaussian:
      out << "gaussian(h=";
      if (median || !h) {
        out << "median";
      } else {
        out << *h;
      }
      out << ")";
      break;
    case RadialKernel::Kind::kMatern32:
      out << "matern32";
      break;
  }
  return out.str();
}

}  // namespace ksd
