#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ksd/kernels.hpp"
#include "ksd/targets.hpp"
#include "ksd/types.hpp"

namespace ksd {

struct TestResult {
  /// n * KSD^2 = (1/n) sum_{i,i'} k0(x_i, x_i'), diagonal included.
  double statistic = 0.0;
  /// (1 + #{replicates >= statistic}) / (B + 1).
  double p_value = 1.0;
  int replicates = 0;
  std::uint64_t seed = 0;
};

/// One-sample KSD test with a Rademacher wild bootstrap.
///
/// Replicate b is (1/n) e^T K0 e with e drawn from stream
/// ("gof/wild_bootstrap", b), so each replicate is independent of the
/// thread schedule. Requires uniform weights and B >= 99.
TestResult ksd_test(const Target& target, const RadialKernel& kernel, const Sample& sample,
                    int replicates, std::uint64_t seed);

/// Same statistic, with the null simulated by drawing fresh samples of the
/// same size from P. Used as a validation oracle for the bootstrap.
TestResult parametric_null_test(const Target& target, const RadialKernel& kernel,
                                const Sample& sample, int replicates, std::uint64_t seed,
                                const std::function<Sample(int n, std::uint64_t seed)>& draw_from_p);

struct PowerStudyConfig {
  std::vector<KernelSpec> kernels;
  std::vector<int> dims;
  int n = 500;
  int trials = 100;
  double alpha = 0.05;
  int replicates = 500;
  std::uint64_t seed = 0;
  /// Scale of the uniform shift on e1; 0 gives the null N(0, I).
  double shift = 1.0;
};

struct PowerCell {
  std::string kernel;
  int dim = 0;
  double power = 0.0;
  int rejections = 0;
  int trials = 0;
};

/// Rejection rates of the KSD test against P = N(0, I_d) for samples
/// x_i = z_i + shift * u_i e1. Trial t in dimension d uses the same sample
/// for every kernel. Cells are ordered by kernel, then dimension.
std::vector<PowerCell> power_study(const PowerStudyConfig& config);

}  // namespace ksd
