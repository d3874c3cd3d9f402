#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "ksd/types.hpp"

namespace ksd {

/// Writes grad log p(x) into the second argument. Both spans have length dim.
using ScoreFunction = std::function<void(std::span<const double>, std::span<double>)>;
using LogDensityFunction = std::function<double(std::span<const double>)>;
using CdfFunction = std::function<double(double)>;

/// A target distribution P known through its score b = grad log p.
///
/// Immutable after construction; safe to share across threads.
class Target {
 public:
  Target(std::string kind, int dim, ScoreFunction score,
         std::optional<LogDensityFunction> log_density = std::nullopt,
         std::optional<CdfFunction> cdf = std::nullopt, std::string spec_json = "{}");

  [[nodiscard]] const std::string& kind() const { return kind_; }
  [[nodiscard]] int dim() const { return dim_; }

  /// Checked evaluation of b(x). Throws ArgumentError on dimension mismatch
  /// or non-finite input.
  [[nodiscard]] Vector score(const Vector& x) const;

  /// Unchecked evaluation for hot loops.
  void score_into(std::span<const double> x, std::span<double> out) const { score_(x, out); }

  /// Scores of every row.
  [[nodiscard]] PointMatrix scores(const PointMatrix& points) const;

  [[nodiscard]] bool has_log_density() const { return log_density_.has_value(); }
  /// Unnormalized log p(x). Throws ArgumentError if unavailable.
  [[nodiscard]] double log_density(const Vector& x) const;

  /// CDF of the (normalized) target; only for some one-dimensional targets.
  [[nodiscard]] const std::optional<CdfFunction>& cdf() const { return cdf_; }

  /// JSON description of the constructor parameters.
  [[nodiscard]] const std::string& spec_json() const { return spec_json_; }

 private:
  std::string kind_;
  int dim_;
  ScoreFunction score_;
  std::optional<LogDensityFunction> log_density_;
  std::optional<CdfFunction> cdf_;
  std::string spec_json_;
};

/// N(mean, I).
Target gaussian_target(const Vector& mean);
inline Target gaussian_target(int dim) { return gaussian_target(Vector::Zero(dim)); }

/// p(x) proportional to exp(-|x + delta e1|^2 / 2) + exp(-|x - delta e1|^2 / 2).
/// The score is evaluated in the tanh form, -x + delta tanh(delta x1) e1,
/// which stays finite for any finite x.
Target symmetric_mixture_target(int dim, double delta);

/// Bayesian logistic regression posterior under a flat prior.
/// covariates is L x dim; labels are 0 or 1.
Target logistic_regression_target(const PointMatrix& covariates, const Vector& labels);

/// log p(x) = -sqrt(1 + |x|^2). Its score is bounded by 1 in norm.
Target pseudo_huber_target(int dim);

/// Probe region for dissipativity_profile: x is drawn uniformly from
/// [-half_width, half_width]^d.
struct ProbeBox {
  double half_width = 10.0;
};

/// Monte Carlo upper estimate of
///   kappa(r) = inf { -2 <b(x) - b(y), x - y> / |x - y|^2 : |x - y| = r }.
/// Each trial draws x from the probe box and y = x + r * u with u a uniform
/// random direction; the result is the minimum ratio seen. Trials consume
/// a single stream sequentially, so a run with more trials only ever lowers
/// the estimate of a run with fewer trials and the same seed.
double dissipativity_profile(const Target& target, double r, int trials, std::uint64_t seed,
                             ProbeBox box = {});

}  // namespace ksd
