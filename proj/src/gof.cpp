#include "ksd/gof.hpp"

#include <string>

#include "ksd/errors.hpp"
#include "ksd/rng.hpp"
#include "ksd/sequences.hpp"
#include "ksd/stein.hpp"

namespace ksd {

namespace {

double v_statistic(const Eigen::MatrixXd& gram) {
  return gram.sum() / static_cast<double>(gram.rows());
}

TestResult finish(double statistic, const std::vector<double>& replicates, std::uint64_t seed) {
  int exceed = 0;
  for (double r : replicates) exceed += r >= statistic ? 1 : 0;
  TestResult result;
  result.statistic = statistic;
  result.replicates = static_cast<int>(replicates.size());
  result.p_value = (1.0 + exceed) / (static_cast<double>(replicates.size()) + 1.0);
  result.seed = seed;
  return result;
}

void check_test_inputs(const Sample& sample, int replicates) {
  if (replicates < 99) throw ArgumentError("the bootstrap needs at least 99 replicates");
  if (!sample.has_uniform_weights()) {
    throw ArgumentError("the KSD test requires a uniformly weighted sample");
  }
}

}  // namespace

TestResult ksd_test(const Target& target, const RadialKernel& kernel, const Sample& sample,
                    int replicates, std::uint64_t seed) {
  check_test_inputs(sample, replicates);
  const Eigen::MatrixXd gram = stein_kernel_matrix(target, kernel, sample.points());
  const Eigen::Index n = gram.rows();
  const double statistic = v_statistic(gram);

  std::vector<double> boot(static_cast<std::size_t>(replicates));
#pragma omp parallel
  {
    Vector signs(n);
    Vector product(n);
#pragma omp for schedule(static)
    for (int b = 0; b < replicates; ++b) {
      CounterRng rng(seed, stream_id("gof/wild_bootstrap", static_cast<std::uint64_t>(b)));
      for (Eigen::Index i = 0; i < n; ++i) signs[i] = rng.rademacher();
      product.noalias() = gram * signs;
      boot[static_cast<std::size_t>(b)] = signs.dot(product) / static_cast<double>(n);
    }
  }
  return finish(statistic, boot, seed);
}

TestResult parametric_null_test(const Target& target, const RadialKernel& kernel,
                                const Sample& sample, int replicates, std::uint64_t seed,
                                const std::function<Sample(int n, std::uint64_t seed)>& draw_from_p) {
  check_test_inputs(sample, replicates);
  const int n = static_cast<int>(sample.size());
  const double statistic = v_statistic(stein_kernel_matrix(target, kernel, sample.points()));
  std::vector<double> null(static_cast<std::size_t>(replicates));
  for (int b = 0; b < replicates; ++b) {
    const Sample fresh = draw_from_p(n, mix64(seed ^ stream_id("gof/parametric_null",
                                                               static_cast<std::uint64_t>(b))));
    null[static_cast<std::size_t>(b)] = v_statistic(stein_kernel_matrix(target, kernel, fresh.points()));
  }
  return finish(statistic, null, seed);
}

std::vector<PowerCell> power_study(const PowerStudyConfig& config) {
  if (config.trials < 1) throw ArgumentError("power study needs at least one trial");
  if (config.kernels.empty() || config.dims.empty()) {
    throw ArgumentError("power study needs kernels and dimensions");
  }
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) throw ArgumentError("alpha must be in [0, 1]");
  std::vector<std::vector<int>> rejections(config.kernels.size(),
                                           std::vector<int>(config.dims.size(), 0));
  for (std::size_t di = 0; di < config.dims.size(); ++di) {
    const int d = config.dims[di];
    const Target target = gaussian_target(d);
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed =
          mix64(config.seed ^ stream_id("gof/power_trial",
                                        (static_cast<std::uint64_t>(d) << 32) |
                                            static_cast<std::uint64_t>(t)));
      const Sample sample = shifted_gaussian(config.n, d, config.shift, trial_seed);
      for (std::size_t ki = 0; ki < config.kernels.size(); ++ki) {
        const RadialKernel kernel = config.kernels[ki].resolve(sample.points());
        const TestResult result =
            ksd_test(target, kernel, sample, config.replicates, mix64(trial_seed + ki + 1));
        if (result.p_value <= config.alpha) ++rejections[ki][di];
      }
    }
  }
  std::vector<PowerCell> cells;
  for (std::size_t ki = 0; ki < config.kernels.size(); ++ki) {
    for (std::size_t di = 0; di < config.dims.size(); ++di) {
      PowerCell cell;
      cell.kernel = config.kernels[ki].label();
      cell.dim = config.dims[di];
      cell.rejections = rejections[ki][di];
      cell.trials = config.trials;
      cell.power = static_cast<double>(cell.rejections) / config.trials;
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace ksd
