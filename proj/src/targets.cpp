#include "ksd/targets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"

namespace ksd {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// log(cosh(a)) without overflow.
double log_cosh(double a) {
  const double abs_a = std::abs(a);
  return abs_a + std::log1p(std::exp(-2.0 * abs_a)) - std::numbers::ln2;
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

Target::Target(std::string kind, int dim, ScoreFunction score,
               std::optional<LogDensityFunction> log_density, std::optional<CdfFunction> cdf,
               std::string spec_json)
    : kind_(std::move(kind)),
      dim_(dim),
      score_(std::move(score)),
      log_density_(std::move(log_density)),
      cdf_(std::move(cdf)),
      spec_json_(std::move(spec_json)) {
  if (dim_ < 1) throw ArgumentError("target dimension must be positive");
  if (!score_) throw ArgumentError("target needs a score function");
}

Vector Target::score(const Vector& x) const {
  if (x.size() != dim_) {
    throw ArgumentError("point has dimension " + std::to_string(x.size()) + ", target expects " +
                        std::to_string(dim_));
  }
  if (!x.allFinite()) throw ArgumentError("score requested at a non-finite point");
  Vector out(dim_);
  score_({x.data(), static_cast<std::size_t>(dim_)}, {out.data(), static_cast<std::size_t>(dim_)});
  return out;
}

PointMatrix Target::scores(const PointMatrix& points) const {
  if (points.cols() != dim_) {
    throw ArgumentError("sample has dimension " + std::to_string(points.cols()) +
                        ", target expects " + std::to_string(dim_));
  }
  PointMatrix out(points.rows(), points.cols());
  const auto d = static_cast<std::size_t>(dim_);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    score_({points.row(i).data(), d}, {out.row(i).data(), d});
  }
  return out;
}

double Target::log_density(const Vector& x) const {
  if (!log_density_) throw ArgumentError("target '" + kind_ + "' has no log density");
  if (x.size() != dim_) throw ArgumentError("point dimension does not match target");
  return (*log_density_)({x.data(), static_cast<std::size_t>(dim_)});
}

Target gaussian_target(const Vector& mean) {
  if (mean.size() < 1) throw ArgumentError("gaussian target needs dim >= 1");
  if (!mean.allFinite()) throw ArgumentError("gaussian mean must be finite");
  const int dim = static_cast<int>(mean.size());
  auto score = [mean](std::span<const double> x, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = mean[static_cast<Eigen::Index>(j)] - x[j];
  };
  auto log_density = [mean](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - mean[static_cast<Eigen::Index>(j)];
      acc += diff * diff;
    }
    return -0.5 * acc;
  };
  std::optional<CdfFunction> cdf;
  if (dim == 1) {
    const double mu = mean[0];
    cdf = [mu](double t) { return normal_cdf(t - mu); };
  }
  std::ostringstream spec;
  spec << R"({"kind":"gaussian","dim":)" << dim << R"(,"mean":[)";
  for (int j = 0; j < dim; ++j) spec << (j ? "," : "") << format_double(mean[j]);
  spec << "]}";
  return Target("gaussian", dim, score, log_density, cdf, spec.str());
}

Target symmetric_mixture_target(int dim, double delta) {
  if (dim < 1) throw ArgumentError("mixture target needs dim >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ArgumentError("mixture offset delta must be finite and nonnegative");
  }
  auto score = [delta](std::span<const double> x, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = -x[j];
    out[0] += delta * std::tanh(delta * x[0]);
  };
  auto log_density = [delta](std::span<const double> x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return -0.5 * sq - 0.5 * delta * delta + log_cosh(delta * x[0]);
  };
  std::optional<CdfFunction> cdf;
  if (dim == 1) {
    cdf = [delta](double t) { return 0.5 * normal_cdf(t + delta) + 0.5 * normal_cdf(t - delta); };
  }
  std::ostringstream spec;
  spec << R"({"kind":"mixture","dim":)" << dim << R"(,"delta":)" << format_double(delta) << "}";
  return Target("mixture", dim, score, log_density, cdf, spec.str());
}

Target logistic_regression_target(const PointMatrix& covariates, const Vector& labels) {
  if (covariates.rows() < 1 || covariates.cols() < 1) {
    throw ArgumentError("logistic regression needs at least one observation and covariate");
  }
  if (labels.size() != covariates.rows()) {
    throw ArgumentError("label count does not match covariate rows");
  }
  if (!covariates.allFinite()) throw ArgumentError("covariates must be finite");
  for (Eigen::Index l = 0; l < labels.size(); ++l) {
    if (labels[l] != 0.0 && labels[l] != 1.0) throw ArgumentError("labels must be 0 or 1");
  }
  const int dim = static_cast<int>(covariates.cols());
  auto score = [covariates, labels](std::span<const double> x, std::span<double> out) {
    Eigen::Map<const Vector> theta(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Vector> result(out.data(), static_cast<Eigen::Index>(out.size()));
    const Vector margins = covariates * theta;
    Vector residual(margins.size());
    for (Eigen::Index l = 0; l < margins.size(); ++l) residual[l] = labels[l] - sigmoid(margins[l]);
    result = covariates.transpose() * residual;
  };
  auto log_density = [covariates, labels](std::span<const double> x) {
    Eigen::Map<const Vector> theta(x.data(), static_cast<Eigen::Index>(x.size()));
    const Vector margins = covariates * theta;
    double acc = 0.0;
    for (Eigen::Index l = 0; l < margins.size(); ++l) {
      acc += labels[l] * margins[l] - softplus(margins[l]);
    }
    return acc;
  };
  std::ostringstream spec;
  spec << R"({"kind":"logistic","dim":)" << dim << R"(,"observations":)" << covariates.rows()
       << "}";
  return Target("logistic", dim, score, log_density, std::nullopt, spec.str());
}

Target pseudo_huber_target(int dim) {
  if (dim < 1) throw ArgumentError("pseudo-Huber target needs dim >= 1");
  auto score = [](std::span<const double> x, std::span<double> out) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    const double scale = 1.0 / std::sqrt(1.0 + sq);
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = -x[j] * scale;
  };
  auto log_density = [](std::span<const double> x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return -std::sqrt(1.0 + sq);
  };
  std::ostringstream spec;
  spec << R"({"kind":"pseudo_huber","dim":)" << dim << "}";
  return Target("pseudo_huber", dim, score, log_density, std::nullopt, spec.str());
}

double dissipativity_profile(const Target& target, double r, int trials, std::uint64_t seed,
                             ProbeBox box) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("dissipativity radius must be > 0");
  if (trials < 1) throw ArgumentError("dissipativity profile needs at least one trial");
  if (!(box.half_width > 0.0)) throw ArgumentError("probe box half width must be > 0");
  const int d = target.dim();
  const auto du = static_cast<std::size_t>(d);
  CounterRng rng(seed, stream_id("targets/dissipativity_profile"));
  Vector x(d), y(d), direction(d), bx(d), by(d);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    for (int j = 0; j < d; ++j) x[j] = box.half_width * (2.0 * rng.uniform() - 1.0);
    double norm = 0.0;
    do {
      for (int j = 0; j < d; ++j) direction[j] = rng.normal();
      norm = direction.norm();
    } while (norm == 0.0);
    y = x + (r / norm) * direction;
    target.score_into({x.data(), du}, {bx.data(), du});
    target.score_into({y.data(), du}, {by.data(), du});
    const Vector diff = x - y;
    const double ratio = -2.0 * (bx - by).dot(diff) / diff.squaredNorm();
    best = std::min(best, ratio);
  }
  return best;
}

}  // namespace ksd
