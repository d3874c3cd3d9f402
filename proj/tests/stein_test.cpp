#include "ksd/stein.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"
#include "ksd/sequences.hpp"
#include "oracles.hpp"

namespace ksd {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Sample point_mass(const Vector& x) {
  PointMatrix points(1, x.size());
  points.row(0) = x.transpose();
  return Sample(points);
}

std::vector<RadialKernel> shipped_kernels() {
  return {RadialKernel::imq(), RadialKernel::imq_bandwidth(2.0), RadialKernel::gaussian(2.0),
          RadialKernel::matern32()};
}

PointMatrix random_points(int n, int d, std::uint64_t seed, double scale = 1.0) {
  CounterRng rng(seed, stream_id("test/stein"));
  PointMatrix points(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) points(i, j) = scale * rng.normal();
  }
  return points;
}

TEST(SteinKernel, CoordExamples) {
  const Target normal = gaussian_target(1);
  EXPECT_DOUBLE_EQ(stein_kernel_coord(normal, RadialKernel::imq(), 0, vec({0.0}), vec({0.0})), 1.0);
  EXPECT_NEAR(testing::fd_stein_kernel_coord(normal, RadialKernel::imq(), 0, vec({0.0}),
                                             vec({0.0})),
              1.0, 1e-5);
  for (double a : {-2.0, 0.0, 0.3, 1.7}) {
    const double value =
        stein_kernel_coord(normal, RadialKernel::gaussian(2.0), 0, vec({a}), vec({a}));
    EXPECT_DOUBLE_EQ(value, a * a + 1.0);
    EXPECT_NEAR(testing::fd_stein_kernel_coord(normal, RadialKernel::gaussian(2.0), 0, vec({a}),
                                               vec({a})),
                a * a + 1.0, 1e-4);
  }
}

TEST(SteinKernel, SymmetricInArguments) {
  const Target target = symmetric_mixture_target(3, 1.5);
  const PointMatrix points = random_points(20, 3, 1);
  for (const RadialKernel& kernel : shipped_kernels()) {
    for (int i = 0; i + 1 < 20; ++i) {
      const Vector x = points.row(i).transpose();
      const Vector y = points.row(i + 1).transpose();
      for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(stein_kernel_coord(target, kernel, j, x, y),
                  stein_kernel_coord(target, kernel, j, y, x));
      }
    }
  }
}

TEST(SteinKernel, SumExamples) {
  EXPECT_DOUBLE_EQ(stein_kernel_sum(gaussian_target(3), RadialKernel::imq(), Vector::Zero(3),
                                    Vector::Zero(3)),
                   3.0);
  const Target normal2 = gaussian_target(2);
  EXPECT_DOUBLE_EQ(
      stein_kernel_sum(normal2, RadialKernel::gaussian(2.0), vec({0.5, -1.5}), vec({0.5, -1.5})),
      0.25 + 2.25 + 2.0);
  const Target normal1 = gaussian_target(1);
  for (const RadialKernel& kernel : shipped_kernels()) {
    EXPECT_EQ(stein_kernel_sum(normal1, kernel, vec({0.4}), vec({-1.1})),
              stein_kernel_coord(normal1, kernel, 0, vec({0.4}), vec({-1.1})));
  }
}

TEST(SteinKernel, ClosedFormMatchesDefinition) {
  PointMatrix covariates = random_points(20, 2, 5);
  Vector labels(20);
  for (int l = 0; l < 20; ++l) labels[l] = covariates(l, 0) + 0.3 * covariates(l, 1) > 0 ? 1 : 0;
  const std::vector<Target> targets = {gaussian_target(vec({0.5, -0.5})),
                                       symmetric_mixture_target(2, 1.5),
                                       logistic_regression_target(covariates, labels),
                                       pseudo_huber_target(2)};
  CounterRng rng(6, stream_id("test/stein"));
  for (const Target& target : targets) {
    for (const RadialKernel& kernel : shipped_kernels()) {
      for (int pair = 0; pair < 50; ++pair) {
        Vector x(2), y(2);
        for (int j = 0; j < 2; ++j) {
          x[j] = rng.normal();
          y[j] = rng.normal();
        }
        const int j = pair % 2;
        const double closed = stein_kernel_coord(target, kernel, j, x, y);
        const double oracle = testing::fd_stein_kernel_coord(target, kernel, j, x, y);
        EXPECT_NEAR(closed, oracle, 1e-3 * std::max(std::abs(oracle), 1e-2))
            << target.kind() << " " << kernel.spec_json();
      }
    }
  }
}

TEST(SteinKernel, RejectsBadArguments) {
  const Target target = gaussian_target(2);
  EXPECT_THROW(stein_kernel_coord(target, RadialKernel::imq(), 0, vec({0.0}), vec({0.0})),
               ArgumentError);
  EXPECT_THROW(stein_kernel_coord(target, RadialKernel::imq(), 2, vec({0.0, 0.0}), vec({0.0, 0.0})),
               ArgumentError);
  EXPECT_THROW(stein_kernel_sum(target, RadialKernel::imq(), vec({0.0, 0.0}), vec({0.0})),
               ArgumentError);
}

TEST(SteinGram, SinglePoint) {
  const Target target = gaussian_target(2);
  const Vector x = vec({0.3, -0.8});
  const SteinGram gram = stein_gram(target, RadialKernel::imq(), point_mass(x));
  ASSERT_EQ(gram.matrix.rows(), 1);
  EXPECT_EQ(gram.matrix(0, 0), stein_kernel_sum(target, RadialKernel::imq(), x, x));
}

TEST(SteinGram, TwoPointQuadraticForm) {
  const Target target = gaussian_target(1);
  PointMatrix points(2, 1);
  points << -0.4, 1.2;
  const SteinGram gram = stein_gram(target, RadialKernel::imq(), Sample(points));
  const double a = gram.matrix(0, 0);
  const double b = gram.matrix(1, 1);
  const double c = gram.matrix(0, 1);
  EXPECT_NEAR(gram.per_coord_quadratic[0], (a + b + 2.0 * c) / 4.0, 1e-15);
}

TEST(SteinGram, MatchesNaiveDoubleLoopExactly) {
  const Target target = gaussian_target(2);
  const RadialKernel kernel = RadialKernel::imq();
  const PointMatrix points = random_points(50, 2, 7);
  const Eigen::MatrixXd gram = stein_gram(target, kernel, Sample(points)).matrix;
  for (int i = 0; i < 50; ++i) {
    for (int k = i; k < 50; ++k) {
      const Vector x = points.row(i).transpose();
      const Vector y = points.row(k).transpose();
      const Vector bx = target.score(x);
      const Vector by = target.score(y);
      double naive = 0.0;
      for (int j = 0; j < 2; ++j) {
        naive += bx[j] * by[j] * kernel.eval(x, y) +
                 (bx[j] * kernel.grad_y_coord(j, x, y) + by[j] * kernel.grad_x_coord(j, x, y)) +
                 kernel.cross_coord(j, x, y);
      }
      EXPECT_EQ(gram(i, k), naive);
      EXPECT_EQ(gram(k, i), gram(i, k));
    }
  }
}

TEST(SteinGram, SymmetricPositiveSemidefinite) {
  const Target target = symmetric_mixture_target(3, 1.5);
  const PointMatrix points = random_points(200, 3, 8, 1.5);
  for (const RadialKernel& kernel : shipped_kernels()) {
    const Eigen::MatrixXd gram = stein_kernel_matrix(target, kernel, points);
    EXPECT_TRUE(gram.isApprox(gram.transpose(), 0.0));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8 * gram.trace()) << kernel.spec_json();
  }
}

TEST(SteinGram, QuadraticFormsAgreeWithMatrix) {
  const Target target = gaussian_target(3);
  const PointMatrix points = random_points(80, 3, 9);
  Vector weights(80);
  for (int i = 0; i < 80; ++i) weights[i] = 1.0 + (i % 7);
  const Sample sample(points, weights);
  const Vector streamed = stein_quadratic_forms(target, RadialKernel::imq(), sample);
  const SteinGram gram = stein_gram(target, RadialKernel::imq(), sample);
  EXPECT_NEAR(streamed.sum(), sample.weights().dot(gram.matrix * sample.weights()), 1e-13);
  EXPECT_EQ(streamed, gram.per_coord_quadratic);
}

TEST(SteinGram, ResourceErrorStatesTheLimit) {
  const PointMatrix points = random_points(100, 1, 10);
  GramOptions tiny;
  tiny.memory_budget_bytes = 1000;
  try {
    (void)stein_gram(gaussian_target(1), RadialKernel::imq(), Sample(points), tiny);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& error) {
    EXPECT_NE(std::string(error.what()).find("1000"), std::string::npos) << error.what();
  }
  // ksd() streams and does not need the matrix.
  EXPECT_NO_THROW(ksd(gaussian_target(1), RadialKernel::imq(), Sample(points)));
}

TEST(Ksd, PointMassAtOrigin) {
  const KsdReport report = ksd(gaussian_target(1), RadialKernel::imq(), point_mass(vec({0.0})));
  EXPECT_DOUBLE_EQ(report.value, 1.0);
  EXPECT_EQ(report.n, 1);
  EXPECT_EQ(report.d, 1);
}

TEST(Ksd, PointMassEqualsRootOfDiagonal) {
  const PointMatrix points = random_points(10, 3, 11, 2.0);
  const Target target = symmetric_mixture_target(3, 1.5);
  for (const RadialKernel& kernel : shipped_kernels()) {
    for (int i = 0; i < 10; ++i) {
      const Vector x = points.row(i).transpose();
      const double expected = std::sqrt(stein_kernel_sum(target, kernel, x, x));
      EXPECT_NEAR(ksd(target, kernel, point_mass(x)).value, expected, 1e-12 * expected);
    }
  }
}

TEST(Ksd, NormsCoincideInOneDimension) {
  const Sample sample = iid_gaussian(50, 1, 3);
  const Target target = gaussian_target(1);
  const double l2 = ksd(target, RadialKernel::imq(), sample, Norm::kL2).value;
  EXPECT_DOUBLE_EQ(ksd(target, RadialKernel::imq(), sample, Norm::kL1).value, l2);
  EXPECT_DOUBLE_EQ(ksd(target, RadialKernel::imq(), sample, Norm::kLInf).value, l2);
}

TEST(Ksd, NormInequalityChain) {
  const Target target = symmetric_mixture_target(4, 1.5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sample sample(random_points(40, 4, 100 + seed, 1.0 + seed));
    for (const RadialKernel& kernel : shipped_kernels()) {
      const double linf = ksd(target, kernel, sample, Norm::kLInf).value;
      const KsdReport l2_report = ksd(target, kernel, sample, Norm::kL2);
      const double l2 = l2_report.value;
      const double l1 = ksd(target, kernel, sample, Norm::kL1).value;
      const double d = 4.0;
      const double slack = 1e-12 * l1;
      EXPECT_LE(linf, l2 + slack);
      EXPECT_LE(l2, l1 + slack);
      EXPECT_LE(l1, std::sqrt(d) * l2 + slack);
      EXPECT_LE(std::sqrt(d) * l2, d * linf + slack);
      EXPECT_EQ(l2, apply_norm(l2_report.w, Norm::kL2));
      EXPECT_TRUE((l2_report.w.array() >= 0.0).all());
    }
  }
}

TEST(Ksd, WeightSplittingInvariance) {
  const Target target = gaussian_target(2);
  const PointMatrix points = random_points(30, 2, 12);
  Vector weights = Vector::Ones(30);
  PointMatrix split(31, 2);
  split.topRows(30) = points;
  split.row(30) = points.row(4);
  Vector split_weights = Vector::Ones(31);
  split_weights[4] = 0.25;
  split_weights[30] = 0.75;
  for (const RadialKernel& kernel : shipped_kernels()) {
    const double base = ksd(target, kernel, Sample(points, weights)).value;
    const double after = ksd(target, kernel, Sample(split, split_weights)).value;
    EXPECT_NEAR(after, base, 1e-12 * base) << kernel.spec_json();
  }
}

TEST(Ksd, ThreadCountDoesNotChangeTheResult) {
  const Sample sample = iid_gaussian(300, 3, 4);
  const Target target = gaussian_target(3);
  const Vector one = stein_quadratic_forms(target, RadialKernel::imq(), sample);
  const Vector again = stein_quadratic_forms(target, RadialKernel::imq(), sample);
  EXPECT_EQ(one, again);
}

TEST(Ksd, NonFiniteScoresRaiseNumericalError) {
  const Target broken("broken", 1, [](std::span<const double>, std::span<double> out) {
    out[0] = std::numeric_limits<double>::quiet_NaN();
  });
  EXPECT_THROW(ksd(broken, RadialKernel::imq(), iid_gaussian(5, 1, 1)), NumericalError);
}

TEST(Witness, PointMassExamples) {
  const Target normal = gaussian_target(1);
  const Sample delta0 = point_mass(vec({0.0}));
  EXPECT_DOUBLE_EQ(optimal_stein_function(normal, RadialKernel::imq(), delta0, 0, vec({0.0})),
                   0.0);
  EXPECT_DOUBLE_EQ(discriminating_test(normal, RadialKernel::imq(), delta0, vec({0.0})), 1.0);
}

TEST(Witness, DecaysFarFromTheSample) {
  const Sample sample = iid_gaussian(20, 2, 5);
  const SteinWitness witness(gaussian_target(2), RadialKernel::imq(), sample);
  const Vector far = vec({600.0, 800.0});
  EXPECT_LT(std::abs(witness.stein_function(0, far)), 1e-2);
  EXPECT_LT(std::abs(witness.stein_function(1, far)), 1e-2);
}

TEST(Witness, LinearInWeightsBeforeNormalization) {
  const Target target = symmetric_mixture_target(2, 1.5);
  const PointMatrix points = random_points(6, 2, 13);
  Vector w1 = Vector::Zero(6);
  Vector w2 = Vector::Zero(6);
  w1.head(3).setConstant(1.0);
  w2.tail(3).setConstant(1.0);
  const Vector y = vec({0.2, -0.4});
  auto unnormalized = [&](const Vector& w) {
    const SteinWitness witness(target, RadialKernel::imq(), Sample(points, w));
    return witness.stein_function(0, y) * witness.discrepancy();
  };
  const double mixed = unnormalized(w1 + w2);
  EXPECT_NEAR(mixed, 0.5 * unnormalized(w1) + 0.5 * unnormalized(w2), 1e-13);
}

TEST(Witness, SampleAverageOfTestFunctionEqualsDiscrepancy) {
  const Target target = symmetric_mixture_target(2, 1.5);
  const PointMatrix points = random_points(40, 2, 14);
  Vector weights(40);
  for (int i = 0; i < 40; ++i) weights[i] = 1.0 + 0.1 * i;
  const Sample sample(points, weights);
  for (const RadialKernel& kernel : shipped_kernels()) {
    const SteinWitness witness(target, kernel, sample);
    double average = 0.0;
    for (int i = 0; i < 40; ++i) {
      average += sample.weights()[i] * witness.test_function(points.row(i).transpose());
    }
    const double expected = ksd(target, kernel, sample).value;
    EXPECT_NEAR(average, expected, 1e-10 * expected) << kernel.spec_json();
  }
}

TEST(Witness, TestFunctionHasZeroMeanUnderTarget) {
  const Target normal = gaussian_target(1);
  const Sample draws = iid_gaussian(100'000, 1, 15);
  for (const RadialKernel& kernel : shipped_kernels()) {
    for (int k = 0; k < 10; ++k) {
      const Vector y = vec({-2.25 + 0.5 * k});
      double sum = 0.0;
      double sum_sq = 0.0;
      for (Eigen::Index i = 0; i < draws.size(); ++i) {
        const double v = stein_kernel_sum(normal, kernel, draws.points().row(i).transpose(), y);
        sum += v;
        sum_sq += v * v;
      }
      const double n = static_cast<double>(draws.size());
      const double mean = sum / n;
      const double se = std::sqrt((sum_sq / n - mean * mean) / n);
      EXPECT_LE(std::abs(mean), 4.0 * se) << kernel.spec_json() << " y=" << y[0];
    }
  }
}

TEST(Witness, DiscriminatingTestHasZeroMeanUnderTarget) {
  const Target normal = gaussian_target(1);
  const SteinWitness witness(normal, RadialKernel::imq(), iid_gaussian(5, vec({1.0}), 16));
  const Sample draws = iid_gaussian(100'000, 1, 17);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < draws.size(); ++i) {
    const double v = witness.test_function(draws.points().row(i).transpose());
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(draws.size());
  const double mean = sum / n;
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt((sum_sq / n - mean * mean) / n));
}

TEST(NormParsing, RoundTrip) {
  for (Norm norm : {Norm::kL1, Norm::kL2, Norm::kLInf}) {
    EXPECT_EQ(parse_norm(to_string(norm)), norm);
  }
  EXPECT_EQ(parse_norm("L2"), Norm::kL2);
  EXPECT_THROW(parse_norm("l3"), ArgumentError);
}

TEST(SampleType, NormalizesWeightsAndRecordsCorrection) {
  PointMatrix points = random_points(4, 1, 18);
  Vector weights(4);
  weights << 1.0, 1.0, 1.0, 1.0;
  const Sample sample(points, weights);
  EXPECT_NEAR(sample.weights().sum(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(sample.weight_correction(), 3.0);
  EXPECT_TRUE(sample.has_uniform_weights());
  Vector negative = weights;
  negative[0] = -1.0;
  EXPECT_THROW(Sample(points, negative), ArgumentError);
  PointMatrix bad = points;
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW((Sample(bad)), ArgumentError);
  EXPECT_THROW((Sample(PointMatrix(0, 1))), ArgumentError);
}

}  // namespace
}  // namespace ksd
