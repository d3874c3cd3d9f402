#include "ksd/diagnostics.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"
#include "ksd/sequences.hpp"

namespace ksd {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

Sample column(const std::vector<double>& xs) {
  PointMatrix points(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) points(static_cast<Eigen::Index>(i), 0) = xs[i];
  return Sample(points);
}

TEST(Wasserstein, PointMassAtZeroEqualsMeanAbsoluteNormal) {
  EXPECT_NEAR(univariate_wasserstein(column({0.0}), normal_cdf), std::sqrt(2.0 / std::numbers::pi),
              1e-6);
}

TEST(Wasserstein, PointMassMatchesClosedForm) {
  // W1(delta_a, N(0,1)) = E|Z - a| = 2 phi(a) + a (2 Phi(a) - 1).
  const boost::math::normal_distribution<double> z;
  for (double a : {-2.0, 0.5, 3.0}) {
    const double expected = 2.0 * boost::math::pdf(z, a) + a * (2.0 * boost::math::cdf(z, a) - 1.0);
    EXPECT_NEAR(univariate_wasserstein(column({a}), normal_cdf), expected, 1e-6);
  }
}

TEST(Wasserstein, QuantileGridIsClose) {
  const boost::math::normal_distribution<double> z;
  const int n = 10'000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = boost::math::quantile(z, (i + 0.5) / n);
  const double value = univariate_wasserstein(column(xs), normal_cdf);
  EXPECT_GE(value, 0.0);
  EXPECT_LT(value, 1e-3);
}

TEST(Wasserstein, TranslationInvariant) {
  const Sample sample = iid_gaussian(200, 1, 3);
  const double base = univariate_wasserstein(sample, normal_cdf);
  const double c = 2.5;
  PointMatrix shifted = sample.points().array() + c;
  const double moved =
      univariate_wasserstein(Sample(shifted), [&](double x) { return normal_cdf(x - c); });
  EXPECT_NEAR(moved, base, 1e-9);
}

TEST(Wasserstein, MatchesBruteForceIntegration) {
  const Sample sample = iid_gaussian(30, Vector::Constant(1, 0.4), 5);
  std::vector<double> xs(sample.points().data(), sample.points().data() + 30);
  std::sort(xs.begin(), xs.end());
  // Midpoint rule on a fine grid as an independent oracle.
  double oracle = 0.0;
  const double h = 1e-4;
  for (double x = -12.0; x < 12.0; x += h) {
    const double mid = x + 0.5 * h;
    const double empirical =
        static_cast<double>(std::upper_bound(xs.begin(), xs.end(), mid) - xs.begin()) / 30.0;
    oracle += std::abs(empirical - normal_cdf(mid)) * h;
  }
  EXPECT_NEAR(univariate_wasserstein(sample, normal_cdf), oracle, 1e-5);
}

TEST(Wasserstein, RespectsWeights) {
  PointMatrix points(2, 1);
  points << -1.0, 1.0;
  Vector weights(2);
  weights << 1.0, 0.0;
  EXPECT_NEAR(univariate_wasserstein(Sample(points, weights), normal_cdf),
              univariate_wasserstein(column({-1.0}), normal_cdf), 1e-9);
}

TEST(Wasserstein, DecreasesAsTheSampleGrows) {
  const double small = univariate_wasserstein(iid_gaussian(50, 1, 1), normal_cdf);
  const double large = univariate_wasserstein(iid_gaussian(20'000, 1, 1), normal_cdf);
  EXPECT_GT(small, 0.0);
  EXPECT_LT(large, small);
  EXPECT_LT(large, 0.03);
}

TEST(Wasserstein, RejectsMultivariateSamples) {
  EXPECT_THROW(univariate_wasserstein(iid_gaussian(5, 2, 1), normal_cdf), ArgumentError);
}

TEST(DecaySlope, ExactPowerLaw) {
  const std::vector<double> ns = {100, 316, 1000, 3162, 10000};
  std::vector<double> values;
  for (double n : ns) values.push_back(3.0 / std::sqrt(n));
  const DecayFit fit = decay_slope(ns, values);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(DecaySlope, ConstantValues) {
  const std::vector<double> ns = {10, 20, 40};
  const std::vector<double> values = {0.7, 0.7, 0.7};
  EXPECT_NEAR(decay_slope(ns, values).slope, 0.0, 1e-15);
}

TEST(DecaySlope, NoisyPowerLaw) {
  CounterRng rng(4, stream_id("test/decay"));
  std::vector<double> ns;
  std::vector<double> values;
  for (double n = 100; n <= 1e4 + 1; n *= std::sqrt(10.0)) {
    ns.push_back(n);
    values.push_back(std::pow(n, -0.5) * (1.0 + 0.01 * (2.0 * rng.uniform() - 1.0)));
  }
  const double slope = decay_slope(ns, values).slope;
  EXPECT_GE(slope, -0.52);
  EXPECT_LE(slope, -0.48);
}

TEST(DecaySlope, ResidualsOrthogonalAndScaleInvariant) {
  const std::vector<double> ns = {50, 100, 200, 400, 800};
  const std::vector<double> values = {0.9, 0.5, 0.45, 0.2, 0.17};
  const DecayFit fit = decay_slope(ns, values);
  double dot_one = 0.0;
  double dot_x = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(ns[i]);
    const double residual = std::log(values[i]) - (fit.intercept + fit.slope * x);
    dot_one += residual;
    dot_x += residual * x;
  }
  EXPECT_NEAR(dot_one, 0.0, 1e-9);
  EXPECT_NEAR(dot_x, 0.0, 1e-9);
  EXPECT_GE(fit.r_squared, 0.0);
  EXPECT_LE(fit.r_squared, 1.0);

  std::vector<double> scaled = values;
  for (double& v : scaled) v *= 42.0;
  const DecayFit scaled_fit = decay_slope(ns, scaled);
  EXPECT_NEAR(scaled_fit.slope, fit.slope, 1e-12);
  EXPECT_NEAR(scaled_fit.intercept, fit.intercept + std::log(42.0), 1e-12);
}

TEST(DecaySlope, RejectsBadInput) {
  const std::vector<double> ns = {1, 2, 3};
  EXPECT_THROW(decay_slope(ns, std::vector<double>{1.0, 0.0, 1.0}), ArgumentError);
  EXPECT_THROW(decay_slope(ns, std::vector<double>{1.0, -1.0, 1.0}), ArgumentError);
  EXPECT_THROW(decay_slope(std::vector<double>{1, 2}, std::vector<double>{1.0, 1.0}), ArgumentError);
  EXPECT_THROW(decay_slope(ns, std::vector<double>{1.0, 1.0}), ArgumentError);
}

}  // namespace
}  // namespace ksd
