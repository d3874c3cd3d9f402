#include "ksd/targets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"
#include "oracles.hpp"

namespace ksd {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

TEST(Targets, GaussianScore) {
  EXPECT_DOUBLE_EQ(gaussian_target(1).score(vec({0.7}))[0], -0.7);
  const Target shifted = gaussian_target(vec({1.0, -2.0}));
  const Vector b = shifted.score(vec({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(b[0], 0.5);
  EXPECT_DOUBLE_EQ(b[1], -2.5);
}

TEST(Targets, MixtureScoreVanishesAtOrigin) {
  EXPECT_EQ(symmetric_mixture_target(1, 1.5).score(vec({0.0}))[0], 0.0);
}

TEST(Targets, MixtureScoreMatchesFiniteDifferences) {
  const Target target = symmetric_mixture_target(2, 1.5);
  const Vector x = vec({1.0, 0.5});
  const Vector b = target.score(x);
  const Vector fd = testing::fd_score(target, x);
  EXPECT_NEAR(b[0], fd[0], 1e-8);
  EXPECT_NEAR(b[1], fd[1], 1e-8);
  EXPECT_DOUBLE_EQ(b[0], -1.0 + 1.5 * std::tanh(1.5));
  EXPECT_DOUBLE_EQ(b[1], -0.5);
}

TEST(Targets, MixtureScoreStaysFiniteFarOut) {
  const Target target = symmetric_mixture_target(1, 1.5);
  for (double x : {-1e3, -45.0, 45.0, 1e6}) {
    const double b = target.score(vec({x}))[0];
    EXPECT_TRUE(std::isfinite(b));
    EXPECT_NEAR(b, -x + 1.5 * (x > 0 ? 1.0 : -1.0), 1e-9 * std::abs(x));
  }
}

TEST(Targets, ScoreMatchesLogDensityGradientForEveryConstructor) {
  CounterRng rng(7, stream_id("test/targets"));
  PointMatrix covariates(30, 3);
  Vector labels(30);
  for (int l = 0; l < 30; ++l) {
    for (int j = 0; j < 3; ++j) covariates(l, j) = rng.normal();
    labels[l] = rng.uniform() < 0.5 ? 0.0 : 1.0;
  }
  const std::vector<Target> targets = {
      gaussian_target(vec({0.3, -1.0, 2.0})), symmetric_mixture_target(3, 1.5),
      logistic_regression_target(covariates, labels), pseudo_huber_target(3)};
  for (const Target& target : targets) {
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(3);
      for (int j = 0; j < 3; ++j) x[j] = 3.0 * rng.normal();
      const Vector b = target.score(x);
      const Vector fd = testing::fd_score(target, x);
      EXPECT_LE((b - fd).norm(), 1e-5 * std::max(1.0, b.norm())) << target.kind();
    }
  }
}

TEST(Targets, LogisticScoreIsFiniteForExtremeParameters) {
  PointMatrix covariates(2, 2);
  covariates << 1.0, 2.0, -3.0, 0.5;
  const Target target = logistic_regression_target(covariates, vec({1.0, 0.0}));
  const Vector b = target.score(vec({1e6, -1e6}));
  EXPECT_TRUE(b.allFinite());
  EXPECT_THROW(logistic_regression_target(covariates, vec({1.0, -1.0})), ArgumentError);
  EXPECT_THROW(logistic_regression_target(covariates, vec({1.0})), ArgumentError);
}

TEST(Targets, PseudoHuberScoreIsBounded) {
  const Target target = pseudo_huber_target(2);
  for (double r : {0.0, 1.0, 1e3, 1e8}) EXPECT_LE(target.score(vec({r, -r})).norm(), 1.0);
}

TEST(Targets, ScoreRejectsBadInput) {
  const Target target = gaussian_target(2);
  EXPECT_THROW((void)target.score(vec({1.0})), ArgumentError);
  EXPECT_THROW((void)target.score(vec({1.0, std::numeric_limits<double>::quiet_NaN()})),
               ArgumentError);
  EXPECT_THROW((void)target.score(vec({std::numeric_limits<double>::infinity(), 0.0})),
               ArgumentError);
}

TEST(Dissipativity, GaussianIsExactlyTwo) {
  const Target target = gaussian_target(3);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    for (int trials : {1, 10, 1000}) {
      EXPECT_EQ(dissipativity_profile(target, 2.0, trials, seed), 2.0);
      EXPECT_EQ(dissipativity_profile(target, 0.5, trials, seed), 2.0);
    }
  }
}

TEST(Dissipativity, MixtureIsPositiveAndAboveGridInfimum) {
  const Target target = symmetric_mixture_target(1, 1.5);
  const double r = 10.0;
  const double estimate = dissipativity_profile(target, r, 10'000, 5);
  // Grid oracle: in d = 1 the pairs at distance r are (x, x + r).
  double grid_min = std::numeric_limits<double>::infinity();
  for (double x = -20.0; x <= 20.0; x += 1e-3) {
    const double bx = target.score(vec({x}))[0];
    const double by = target.score(vec({x + r}))[0];
    grid_min = std::min(grid_min, -2.0 * (bx - by) * (x - (x + r)) / (r * r));
  }
  EXPECT_GT(grid_min, 0.0);
  EXPECT_GT(estimate, 0.0);
  EXPECT_GE(estimate, grid_min - 1e-12);
  EXPECT_LT(estimate - grid_min, 0.05);
}

TEST(Dissipativity, DeterministicAndMonotoneInTrials) {
  const Target target = symmetric_mixture_target(2, 2.0);
  const double one = dissipativity_profile(target, 1.0, 1, 42);
  EXPECT_EQ(one, dissipativity_profile(target, 1.0, 1, 42));
  double previous = one;
  for (int trials : {10, 100, 1000}) {
    const double next = dissipativity_profile(target, 1.0, trials, 42);
    EXPECT_LE(next, previous);
    previous = next;
  }
}

TEST(Dissipativity, RejectsNonPositiveRadius) {
  const Target target = gaussian_target(1);
  EXPECT_THROW(dissipativity_profile(target, 0.0, 10, 1), ArgumentError);
  EXPECT_THROW(dissipativity_profile(target, -1.0, 10, 1), ArgumentError);
  EXPECT_THROW(dissipativity_profile(target, 1.0, 0, 1), ArgumentError);
}

}  // namespace
}  // namespace ksd
