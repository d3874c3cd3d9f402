#include "ksd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ksd/errors.hpp"
#include "ksd/io.hpp"
#include "ksd/rng.hpp"
#include "ksd/sequences.hpp"
#include "ksd/stein.hpp"

namespace ksd::experiments {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::ofstream open_output(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / file);
  if (!out) throw ArgumentError("cannot write '" + (dir / file).string() + "'");
  return out;
}

std::vector<double> to_doubles(const std::vector<int>& values) {
  return {values.begin(), values.end()};
}

std::vector<double> medians_of(const std::vector<std::vector<double>>& per_seed) {
  std::vector<double> out;
  out.reserve(per_seed.size());
  for (const auto& row : per_seed) out.push_back(median(row));
  return out;
}

}  // namespace

std::vector<int> log_grid(double lo_exponent, double hi_exponent, double step) {
  if (!(step > 0.0) || hi_exponent < lo_exponent) throw ArgumentError("bad log grid");
  std::vector<int> out;
  const int count = static_cast<int>(std::floor((hi_exponent - lo_exponent) / step + 1e-9)) + 1;
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<int>(std::lround(std::pow(10.0, lo_exponent + k * step))));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

DecayCurve ksd_decay(const Target& target, const RadialKernel& kernel, const Generator& generator,
                     const std::vector<int>& ns, const std::vector<std::uint64_t>& seeds) {
  if (ns.empty() || seeds.empty()) throw ArgumentError("decay curve needs n values and seeds");
  DecayCurve curve;
  curve.ns = ns;
  curve.per_seed.assign(ns.size(), std::vector<double>(seeds.size(), 0.0));
  const int n_max = *std::max_element(ns.begin(), ns.end());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const Sample full = generator(n_max, seeds[s]);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      curve.per_seed[k][s] = ksd(target, kernel, full.head(ns[k])).value;
    }
  }
  curve.medians = medians_of(curve.per_seed);
  if (ns.size() >= 3) {
    const auto xs = to_doubles(ns);
    curve.fit = decay_slope(xs, curve.medians);
  }
  return curve;
}

Fig1Result run_fig1(const Fig1Config& config) {
  const Target target = symmetric_mixture_target(1, config.delta);
  const RadialKernel kernel = RadialKernel::imq();
  const double delta = config.delta;
  const Generator on = [delta](int n, std::uint64_t seed) { return mixture_iid(n, 1, delta, seed); };
  const Generator off = [delta](int n, std::uint64_t seed) {
    return single_component(n, 1, delta, seed);
  };
  Fig1Result result;
  result.on_target = ksd_decay(target, kernel, on, config.ns, config.seeds);
  result.off_target = ksd_decay(target, kernel, off, config.ns, config.seeds);

  const auto& cdf = *target.cdf();
  const int n_max = *std::max_element(config.ns.begin(), config.ns.end());
  auto wasserstein = [&](const Generator& gen) {
    std::vector<std::vector<double>> table(config.ns.size(),
                                           std::vector<double>(config.seeds.size()));
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      const Sample full = gen(n_max, config.seeds[s]);
      for (std::size_t k = 0; k < config.ns.size(); ++k) {
        table[k][s] = univariate_wasserstein(full.head(config.ns[k]), cdf);
      }
    }
    return table;
  };
  result.on_wasserstein = wasserstein(on);
  result.off_wasserstein = wasserstein(off);

  const SteinWitness on_witness(target, kernel, on(config.function_n, config.seeds.front()));
  const SteinWitness off_witness(target, kernel, off(config.function_n, config.seeds.front()));
  for (int g = 0; g < config.grid_points; ++g) {
    const double y = config.grid_lo +
                     (config.grid_hi - config.grid_lo) * g / std::max(1, config.grid_points - 1);
    const Vector point = Vector::Constant(1, y);
    result.grid.push_back(y);
    result.g_on.push_back(on_witness.stein_function(0, point));
    result.h_on.push_back(on_witness.test_function(point));
    result.g_off.push_back(off_witness.stein_function(0, point));
    result.h_off.push_back(off_witness.test_function(point));
  }
  return result;
}

void write_fig1(const Fig1Config& config, const Fig1Result& result,
                const std::filesystem::path& dir) {
  {
    auto out = open_output(dir, "fig1_discrepancy.csv");
    io::CsvWriter csv(out, {"sequence", "seed", "n", "imq_ksd", "wasserstein"});
    auto emit = [&](const std::string& name, const DecayCurve& curve,
                    const std::vector<std::vector<double>>& wass) {
      for (std::size_t k = 0; k < curve.ns.size(); ++k) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
          csv.cell(name)
              .cell(static_cast<long long>(config.seeds[s]))
              .cell(curve.ns[k])
              .cell(curve.per_seed[k][s])
              .cell(wass[k][s]);
          csv.end_row();
        }
      }
    };
    emit("target", result.on_target, result.on_wasserstein);
    emit("single_component", result.off_target, result.off_wasserstein);
  }
  {
    auto out = open_output(dir, "fig1_functions.csv");
    io::CsvWriter csv(out, {"y", "g_target", "h_target", "g_single_component",
                            "h_single_component"});
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
      csv.cell(result.grid[g]).cell(result.g_on[g]).cell(result.h_on[g]).cell(result.g_off[g]).cell(
          result.h_off[g]);
      csv.end_row();
    }
  }
  write_manifest(dir, "fig1",
                 {{"delta", config.delta},
                  {"ns", config.ns},
                  {"seeds", config.seeds},
                  {"function_n", config.function_n},
                  {"grid", {config.grid_lo, config.grid_hi, config.grid_points}},
                  {"kernel", json::parse(RadialKernel::imq().spec_json())},
                  {"on_target_slope", result.on_target.fit.slope},
                  {"off_target_slope", result.off_target.fit.slope}});
}

std::vector<Fig2Row> run_fig2(const Fig2Config& config) {
  const std::vector<std::pair<std::string, RadialKernel>> kernels = {
      {"gaussian", RadialKernel::gaussian(2.0)},
      {"matern32", RadialKernel::matern32()},
      {"imq", RadialKernel::imq()}};
  std::vector<Fig2Row> rows;
  for (int d : config.dims) {
    const Target target = gaussian_target(d);
    for (int n : config.ns) {
      const Sample sample = packing(n, d, config.seed);
      for (const auto& [name, kernel] : kernels) {
        rows.push_back({"packing", name, d, n, ksd(target, kernel, sample).value});
      }
    }
    if (config.include_iid) {
      const int n_max = *std::max_element(config.ns.begin(), config.ns.end());
      const Sample full = iid_gaussian(n_max, d, config.seed);
      for (int n : config.ns) {
        const Sample sample = full.head(n);
        for (const auto& [name, kernel] : kernels) {
          rows.push_back({"iid", name, d, n, ksd(target, kernel, sample).value});
        }
      }
    }
  }
  return rows;
}

void write_fig2(const Fig2Config& config, const std::vector<Fig2Row>& rows,
                const std::filesystem::path& dir) {
  auto out = open_output(dir, "fig2_kernel_choice.csv");
  io::CsvWriter csv(out, {"sequence", "kernel", "d", "n", "ksd"});
  for (const auto& row : rows) {
    csv.cell(row.sequence).cell(row.kernel).cell(row.dim).cell(row.n).cell(row.ksd);
    csv.end_row();
  }
  write_manifest(dir, "fig2",
                 {{"dims", config.dims},
                  {"ns", config.ns},
                  {"seed", config.seed},
                  {"include_iid", config.include_iid},
                  {"kernels",
                   {json::parse(RadialKernel::gaussian(2.0).spec_json()),
                    json::parse(RadialKernel::matern32().spec_json()),
                    json::parse(RadialKernel::imq().spec_json())}}});
}

PowerStudyConfig default_table1_config() {
  PowerStudyConfig config;
  KernelSpec imq;
  KernelSpec gauss;
  gauss.kind = RadialKernel::Kind::kGaussian;
  gauss.median = true;
  KernelSpec gauss_fixed;
  gauss_fixed.kind = RadialKernel::Kind::kGaussian;
  gauss_fixed.h = 2.0;
  config.kernels = {imq, gauss, gauss_fixed};
  config.dims = {2, 5, 10, 15, 20};
  config.n = 500;
  config.trials = 100;
  config.alpha = 0.05;
  config.replicates = 500;
  config.seed = 1;
  config.shift = 1.0;
  return config;
}

void write_table1(const PowerStudyConfig& config, const std::vector<PowerCell>& cells,
                  const std::filesystem::path& dir) {
  auto out = open_output(dir, "table1_power.csv");
  io::CsvWriter csv(out, {"kernel", "d", "power", "rejections", "trials"});
  for (const auto& cell : cells) {
    csv.cell(cell.kernel).cell(cell.dim).cell(cell.power).cell(cell.rejections).cell(cell.trials);
    csv.end_row();
  }
  json kernels = json::array();
  for (const auto& k : config.kernels) kernels.push_back(k.label());
  write_manifest(dir, "table1",
                 {{"kernels", kernels},
                  {"dims", config.dims},
                  {"n", config.n},
                  {"trials", config.trials},
                  {"alpha", config.alpha},
                  {"replicates", config.replicates},
                  {"seed", config.seed},
                  {"shift", config.shift}});
}

std::vector<BbisRow> run_bbis(const BbisConfig& config) {
  std::vector<BbisRow> rows;
  for (int d : config.dims) {
    const Target target = gaussian_target(d);
    const Vector true_mean = Vector::Zero(d);
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t seed =
          mix64(config.seed ^ stream_id("experiments/bbis",
                                        (static_cast<std::uint64_t>(d) << 32) |
                                            static_cast<std::uint64_t>(t)));
      const Sample sample = iid_gaussian(config.n, d, seed);
      const double h = median_bandwidth(sample.points());
      const ReweightResult imq =
          bbis_weights(target, RadialKernel::imq_bandwidth(h), sample.points(), config.options);
      const ReweightResult gauss =
          bbis_weights(target, RadialKernel::gaussian(h), sample.points(), config.options);
      BbisRow row;
      row.dim = d;
      row.trial = t;
      row.mse_uniform = mean_mse(sample.weights(), sample.points(), true_mean);
      row.mse_imq = mean_mse(imq.weights, sample.points(), true_mean);
      row.mse_gaussian = mean_mse(gauss.weights, sample.points(), true_mean);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<BbisSummary> summarize_bbis(const std::vector<BbisRow>& rows) {
  std::vector<BbisSummary> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.dim == row.dim; });
    if (it == out.end()) {
      out.push_back({row.dim, 0.0, 0.0, 0.0});
      it = out.end() - 1;
    }
    it->mean_uniform += row.mse_uniform;
    it->mean_imq += row.mse_imq;
    it->mean_gaussian += row.mse_gaussian;
  }
  for (auto& s : out) {
    const auto count = std::count_if(rows.begin(), rows.end(),
                                     [&](const auto& r) { return r.dim == s.dim; });
    s.mean_uniform /= static_cast<double>(count);
    s.mean_imq /= static_cast<double>(count);
    s.mean_gaussian /= static_cast<double>(count);
  }
  return out;
}

void write_bbis(const BbisConfig& config, const std::vector<BbisRow>& rows,
                const std::filesystem::path& dir) {
  {
    auto out = open_output(dir, "bbis_trials.csv");
    io::CsvWriter csv(out, {"d", "trial", "mse_uniform", "mse_imq", "mse_gaussian"});
    for (const auto& r : rows) {
      csv.cell(r.dim).cell(r.trial).cell(r.mse_uniform).cell(r.mse_imq).cell(r.mse_gaussian);
      csv.end_row();
    }
  }
  {
    auto out = open_output(dir, "bbis_summary.csv");
    io::CsvWriter csv(out, {"d", "mean_mse_uniform", "mean_mse_imq", "mean_mse_gaussian"});
    for (const auto& s : summarize_bbis(rows)) {
      csv.cell(s.dim).cell(s.mean_uniform).cell(s.mean_imq).cell(s.mean_gaussian);
      csv.end_row();
    }
  }
  write_manifest(dir, "bbis",
                 {{"dims", config.dims},
                  {"n", config.n},
                  {"trials", config.trials},
                  {"seed", config.seed},
                  {"max_iters", config.options.max_iters},
                  {"tol", config.options.tol}});
}

UlaTuningResult run_ula_tuning(const UlaTuningConfig& config) {
  const Target target = symmetric_mixture_target(config.dim, config.delta);
  const RadialKernel kernel = RadialKernel::imq();
  UlaTuningResult result;
  result.steps = config.steps;
  result.per_seed.assign(config.steps.size(), std::vector<double>(config.seeds.size()));
  const Vector x0 = Vector::Zero(config.dim);
  for (std::size_t k = 0; k < config.steps.size(); ++k) {
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      const Sample chain = ula_chain(target, config.n, config.steps[k], x0, config.seeds[s]);
      result.per_seed[k][s] = ksd(target, kernel, chain).value;
    }
  }
  result.medians = medians_of(result.per_seed);
  result.best_index = static_cast<std::size_t>(
      std::min_element(result.medians.begin(), result.medians.end()) - result.medians.begin());
  return result;
}

void write_ula_tuning(const UlaTuningConfig& config, const UlaTuningResult& result,
                      const std::filesystem::path& dir) {
  auto out = open_output(dir, "ula_tuning.csv");
  io::CsvWriter csv(out, {"step", "seed", "imq_ksd"});
  for (std::size_t k = 0; k < result.steps.size(); ++k) {
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      csv.cell(result.steps[k]).cell(static_cast<long long>(config.seeds[s])).cell(
          result.per_seed[k][s]);
      csv.end_row();
    }
  }
  write_manifest(dir, "ula_tuning",
                 {{"steps", config.steps},
                  {"n", config.n},
                  {"dim", config.dim},
                  {"delta", config.delta},
                  {"seeds", config.seeds},
                  {"x0", "origin"},
                  {"selected_step", result.steps[result.best_index]}});
}

std::vector<BoundedScoreRow> run_bounded_score(const BoundedScoreConfig& config) {
  const Target target = pseudo_huber_target(config.dim);
  const RadialKernel kernel = RadialKernel::imq();
  std::vector<BoundedScoreRow> rows;
  for (int n : config.ns) rows.push_back({n, ksd(target, kernel, bounded_score_line(n, config.dim)).value});
  return rows;
}

void write_bounded_score(const BoundedScoreConfig& config, const std::vector<BoundedScoreRow>& rows,
                         const std::filesystem::path& dir) {
  auto out = open_output(dir, "bounded_score.csv");
  io::CsvWriter csv(out, {"n", "imq_ksd"});
  for (const auto& r : rows) {
    csv.cell(r.n).cell(r.ksd);
    csv.end_row();
  }
  write_manifest(dir, "bounded_score",
                 {{"ns", config.ns},
                  {"dim", config.dim},
                  {"target", json::parse(pseudo_huber_target(config.dim).spec_json())}});
}

void write_manifest(const std::filesystem::path& dir, const std::string& name,
                    const json& config) {
  auto out = open_output(dir, name + "_manifest.json");
  const json manifest = {{"schema", io::kSchemaVersion},
                         {"experiment", name},
                         {"version", kVersion},
                         {"prng", "counter-splitmix64"},
                         {"config", config}};
  out << manifest.dump(2) << "\n";
}

}  // namespace ksd::experiments
