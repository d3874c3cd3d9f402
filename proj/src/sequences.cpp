#include "ksd/sequences.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"

namespace ksd {

namespace {

void check_count(int n, int dim) {
  if (n < 1) throw ArgumentError("sequence length must be >= 1");
  if (dim < 1) throw ArgumentError("sequence dimension must be >= 1");
}

void fill_normal(CounterRng& rng, PointMatrix& points) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) points(i, j) = rng.normal();
  }
}

}  // namespace

Sample iid_gaussian(int n, const Vector& mean, std::uint64_t seed) {
  const int dim = static_cast<int>(mean.size());
  check_count(n, dim);
  CounterRng rng(seed, stream_id("sequences/iid_gaussian"));
  PointMatrix points(n, dim);
  fill_normal(rng, points);
  points.rowwise() += mean.transpose();
  return Sample(std::move(points));
}

Sample mixture_iid(int n, int dim, double delta, std::uint64_t seed) {
  check_count(n, dim);
  CounterRng rng(seed, stream_id("sequences/mixture_iid"));
  PointMatrix points(n, dim);
  for (int i = 0; i < n; ++i) {
    const double sign = rng.rademacher();
    for (int j = 0; j < dim; ++j) points(i, j) = rng.normal();
    points(i, 0) += sign * delta;
  }
  return Sample(std::move(points));
}

Sample single_component(int n, int dim, double delta, std::uint64_t seed) {
  check_count(n, dim);
  CounterRng rng(seed, stream_id("sequences/single_component"));
  PointMatrix points(n, dim);
  fill_normal(rng, points);
  points.col(0).array() -= delta;
  return Sample(std::move(points));
}

double packing_radius(int n, int dim) {
  return 2.0 * std::pow(static_cast<double>(n), 1.0 / dim) * std::log(static_cast<double>(n));
}

double packing_separation(int n) { return 2.0 * std::log(static_cast<double>(n)); }

Sample packing(int n, int dim, std::uint64_t seed, const PackingOptions& options) {
  if (n < 2) throw ArgumentError("packing needs n >= 2");
  if (dim < 1) throw ArgumentError("packing needs dim >= 1");
  if (dim < 3) {
    std::clog << "warning: packing sequences only defeat light-tailed kernels for dim >= 3\n";
  }
  const double radius = packing_radius(n, dim);
  const double separation = packing_separation(n);
  const double separation_sq = separation * separation;

  int best_achieved = 0;
  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    CounterRng rng(seed, stream_id("sequences/packing", static_cast<std::uint64_t>(attempt)));
    PointMatrix points(n, dim);
    Vector candidate(dim);
    int accepted = 0;
    long rejections = 0;
    while (accepted < n && rejections < options.max_consecutive_rejections) {
      double norm = 0.0;
      do {
        for (int j = 0; j < dim; ++j) candidate[j] = rng.normal();
        norm = candidate.norm();
      } while (norm == 0.0);
      const double r = radius * std::pow(rng.uniform(), 1.0 / dim);
      candidate *= r / norm;
      bool ok = candidate.norm() <= radius;
      for (int i = 0; ok && i < accepted; ++i) {
        if ((points.row(i).transpose() - candidate).squaredNorm() <= separation_sq) ok = false;
      }
      if (ok) {
        points.row(accepted++) = candidate.transpose();
        rejections = 0;
      } else {
        ++rejections;
      }
    }
    if (accepted == n) return Sample(std::move(points));
    best_achieved = std::max(best_achieved, accepted);
  }
  std::ostringstream msg;
  msg << "packing stalled after " << options.max_consecutive_rejections
      << " consecutive rejections; placed " << best_achieved << " of " << n << " points";
  throw ResourceError(msg.str());
}

Sample bounded_score_line(int n, int dim) {
  check_count(n, dim);
  PointMatrix points = PointMatrix::Zero(n, dim);
  for (int i = 0; i < n; ++i) points(i, 0) = static_cast<double>(i + 1) * n;
  return Sample(std::move(points));
}

Sample ula_chain(const Target& target, int n, double step, const Vector& x0, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("chain length must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("ULA step size must be > 0");
  if (x0.size() != target.dim()) throw ArgumentError("initial point has the wrong dimension");
  if (!x0.allFinite()) throw ArgumentError("initial point must be finite");
  const int d = target.dim();
  const auto du = static_cast<std::size_t>(d);
  CounterRng rng(seed, stream_id("sequences/ula_chain"));
  const double noise = std::sqrt(step);
  Vector x = x0;
  Vector b(d);
  PointMatrix points(n, d);
  for (int t = 0; t < n; ++t) {
    target.score_into({x.data(), du}, {b.data(), du});
    for (int j = 0; j < d; ++j) x[j] += 0.5 * step * b[j] + noise * rng.normal();
    if (!x.allFinite() || x.norm() > 1e8) {
      std::ostringstream msg;
      msg << "unadjusted Langevin chain diverged at iteration " << t << " with step size " << step;
      throw NumericalError(msg.str());
    }
    points.row(t) = x.transpose();
  }
  return Sample(std::move(points));
}

Sample shifted_gaussian(int n, int dim, double shift_scale, std::uint64_t seed) {
  check_count(n, dim);
  CounterRng rng(seed, stream_id("sequences/shifted_gaussian"));
  PointMatrix points(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) points(i, j) = rng.normal();
    points(i, 0) += shift_scale * rng.uniform();
  }
  return Sample(std::move(points));
}

}  // namespace ksd

namespace ksd {

std::string to_string(SequenceSpec::Kind kind) {
  switch (kind) {
    case SequenceSpec::Kind::kIidGaussian:
      return "iid_gaussian";
    case SequenceSpec::Kind::kMixtureIid:
      return "mixture_iid";
    case SequenceSpec::Kind::kSingleComponent:
      return "single_component";
    case SequenceSpec::Kind::kPacking:
      return "packing";
    case SequenceSpec::Kind::kBoundedScoreLine:
      return "bounded_score_line";
    case SequenceSpec::Kind::kUlaChain:
      return "ula_chain";
  }
  return "iid_gaussian";
}

SequenceSpec::Kind parse_sequence_kind(const std::string& text) {
  for (auto kind : {SequenceSpec::Kind::kIidGaussian, SequenceSpec::Kind::kMixtureIid,
                    SequenceSpec::Kind::kSingleComponent, SequenceSpec::Kind::kPacking,
                    SequenceSpec::Kind::kBoundedScoreLine, SequenceSpec::Kind::kUlaChain}) {
    if (to_string(kind) == text) return kind;
  }
  throw ArgumentError("unknown sequence kind '" + text + "'");
}

Sample generate(const SequenceSpec& spec) {
  switch (spec.kind) {
    case SequenceSpec::Kind::kIidGaussian:
      return iid_gaussian(spec.n, spec.dim, spec.seed);
    case SequenceSpec::Kind::kMixtureIid:
      return mixture_iid(spec.n, spec.dim, spec.delta, spec.seed);
    case SequenceSpec::Kind::kSingleComponent:
      return single_component(spec.n, spec.dim, spec.delta, spec.seed);
    case SequenceSpec::Kind::kPacking:
      return packing(spec.n, spec.dim, spec.seed);
    case SequenceSpec::Kind::kBoundedScoreLine:
      return bounded_score_line(spec.n, spec.dim);
    case SequenceSpec::Kind::kUlaChain: {
      if (!spec.target) throw ArgumentError("ula_chain needs a target");
      const Vector x0 = spec.x0.size() == 0 ? Vector::Zero(spec.target->dim()) : spec.x0;
      return ula_chain(*spec.target, spec.n, spec.step, x0, spec.seed);
    }
  }
  throw ArgumentError("unknown sequence kind");
}

}  // namespace ksd
