#include "ksd/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <omp.h>
#include <sstream>

#include "ksd/diagnostics.hpp"
#include "ksd/errors.hpp"
#include "ksd/experiments.hpp"
#include "ksd/io.hpp"

namespace ksd::cli {

namespace {

using nlohmann::json;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("bad integer '" + item + "' in list");
    }
  }
  if (out.empty()) throw ArgumentError("empty integer list");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (int v : parse_int_list(text)) {
    if (v < 0) throw ArgumentError("seeds must be nonnegative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw ArgumentError("empty number list");
  return out;
}

/// Writes text to the --out file when given, otherwise to out.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ArgumentError("cannot write '" + path + "'");
  file << text;
}

struct Common {
  std::string target;
  std::string kernel;
  std::string sample;
  bool weighted = false;
  std::string out;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel Stein discrepancy toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); never changes results")
      ->check(CLI::NonNegativeNumber);

  Common c;
  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--target", c.target, "Target spec, e.g. gaussian:d=1 or JSON")->required();
  };
  auto add_kernel = [&](CLI::App* sub) {
    sub->add_option("--kernel", c.kernel, "Kernel spec, e.g. imq:c=1,beta=-0.5")
        ->default_val("imq:c=1,beta=-0.5");
  };
  auto add_sample = [&](CLI::App* sub, const std::string& flag) {
    sub->add_option(flag, c.sample, "CSV file, one point per row")->required();
    sub->add_flag("--weighted", c.weighted, "Last CSV column holds weights");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", c.out, "Output path"); };

  // ksd
  std::string norm = "l2";
  auto* ksd_cmd = app.add_subcommand("ksd", "Kernel Stein discrepancy of a sample");
  add_target(ksd_cmd);
  add_kernel(ksd_cmd);
  add_sample(ksd_cmd, "--sample");
  add_out(ksd_cmd);
  ksd_cmd->add_option("--norm", norm, "l1, l2 or linf")->default_val("l2");

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "Stein kernel Gram matrix as JSON");
  add_target(gram_cmd);
  add_kernel(gram_cmd);
  add_sample(gram_cmd, "--sample");
  add_out(gram_cmd);

  // test
  int replicates = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  auto* test_cmd = app.add_subcommand("test", "Wild-bootstrap goodness-of-fit test");
  add_target(test_cmd);
  add_kernel(test_cmd);
  add_sample(test_cmd, "--sample");
  add_out(test_cmd);
  test_cmd->add_option("--B", replicates, "Bootstrap replicates")->default_val(500);
  test_cmd->add_option("--alpha", alpha, "Significance level")->default_val(0.05);
  test_cmd->add_option("--seed", seed, "Seed")->default_val(0);

  // reweight
  int max_iters = 5000;
  double tol = 1e-10;
  auto* reweight_cmd = app.add_subcommand("reweight", "KSD-minimizing simplex weights");
  add_target(reweight_cmd);
  add_kernel(reweight_cmd);
  add_sample(reweight_cmd, "--points");
  add_out(reweight_cmd);
  reweight_cmd->add_option("--max-iters", max_iters)->default_val(5000);
  reweight_cmd->add_option("--tol", tol)->default_val(1e-10);

  // generate
  std::string kind;
  std::string spec_json;
  int n = 0;
  int dim = 1;
  double delta = 1.5;
  double step = 0.1;
  auto* gen_cmd = app.add_subcommand("generate", "Emit a generated sample as CSV");
  gen_cmd->add_option("--kind", kind,
                      "iid_gaussian, mixture_iid, single_component, packing, "
                      "bounded_score_line, ula_chain");
  gen_cmd->add_option("--spec", spec_json, "SequenceSpec JSON (literal or @file)");
  gen_cmd->add_option("--n", n);
  gen_cmd->add_option("--dim", dim)->default_val(1);
  gen_cmd->add_option("--seed", seed)->default_val(0);
  gen_cmd->add_option("--delta", delta)->default_val(1.5);
  gen_cmd->add_option("--step", step)->default_val(0.1);
  gen_cmd->add_option("--target", c.target, "Target for ula_chain");
  add_out(gen_cmd);

  // wass
  auto* wass_cmd = app.add_subcommand("wass", "Univariate Wasserstein distance to the target");
  add_target(wass_cmd);
  add_sample(wass_cmd, "--sample");
  add_out(wass_cmd);

  // experiment
  std::string name;
  std::string dims_text, ns_text, seeds_text, steps_text;
  int trials = -1;
  std::string out_dir = "results";
  auto* exp_cmd = app.add_subcommand("experiment", "Run a named experiment");
  exp_cmd->add_option("name", name, "fig1, fig2, table1, bbis, ula_tuning, bounded_score")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "table1", "bbis", "ula_tuning", "bounded_score"}));
  exp_cmd->add_option("--dims", dims_text, "Comma-separated dimensions");
  exp_cmd->add_option("--ns", ns_text, "Comma-separated sample sizes");
  exp_cmd->add_option("--seeds", seeds_text, "Comma-separated seeds");
  exp_cmd->add_option("--steps", steps_text, "Comma-separated ULA step sizes");
  exp_cmd->add_option("--trials", trials, "Trials per configuration");
  exp_cmd->add_option("--n", n, "Sample size");
  exp_cmd->add_option("--B", replicates, "Bootstrap replicates");
  exp_cmd->add_option("--alpha", alpha, "Significance level");
  exp_cmd->add_option("--seed", seed, "Base seed");
  exp_cmd->add_option("--out", out_dir, "Output directory")->default_val("results");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);

    if (*ksd_cmd) {
      const Target target = io::parse_target(c.target);
      const Sample sample = io::read_sample_csv(c.sample, c.weighted);
      const RadialKernel kernel = io::parse_kernel(c.kernel).resolve(sample.points());
      const KsdReport report = ksd(target, kernel, sample, parse_norm(norm));
      emit(c.out, io::to_json(report).dump(2) + "\n", out);
    } else if (*gram_cmd) {
      const Target target = io::parse_target(c.target);
      const Sample sample = io::read_sample_csv(c.sample, c.weighted);
      const RadialKernel kernel = io::parse_kernel(c.kernel).resolve(sample.points());
      const SteinGram gram = stein_gram(target, kernel, sample);
      json matrix = json::array();
      for (Eigen::Index i = 0; i < gram.matrix.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < gram.matrix.cols(); ++k) row.push_back(gram.matrix(i, k));
        matrix.push_back(row);
      }
      json quad = json::array();
      for (Eigen::Index j = 0; j < gram.per_coord_quadratic.size(); ++j) {
        quad.push_back(gram.per_coord_quadratic[j]);
      }
      const json doc = {{"schema", io::kSchemaVersion},
                        {"n", sample.size()},
                        {"d", sample.dim()},
                        {"kernel", json::parse(kernel.spec_json())},
                        {"target", json::parse(target.spec_json())},
                        {"matrix", matrix},
                        {"per_coord_quadratic", quad}};
      emit(c.out, doc.dump(2) + "\n", out);
    } else if (*test_cmd) {
      const Target target = io::parse_target(c.target);
      const Sample sample = io::read_sample_csv(c.sample, c.weighted);
      const RadialKernel kernel = io::parse_kernel(c.kernel).resolve(sample.points());
      const TestResult result = ksd_test(target, kernel, sample, replicates, seed);
      json doc = io::to_json(result);
      doc["alpha"] = alpha;
      doc["reject"] = result.p_value <= alpha;
      doc["kernel"] = json::parse(kernel.spec_json());
      doc["target"] = json::parse(target.spec_json());
      emit(c.out, doc.dump(2) + "\n", out);
    } else if (*reweight_cmd) {
      const Target target = io::parse_target(c.target);
      const Sample sample = io::read_sample_csv(c.sample, c.weighted);
      const RadialKernel kernel = io::parse_kernel(c.kernel).resolve(sample.points());
      ReweightOptions options;
      options.max_iters = max_iters;
      options.tol = tol;
      json doc = io::to_json(bbis_weights(target, kernel, sample.points(), options));
      doc["kernel"] = json::parse(kernel.spec_json());
      doc["target"] = json::parse(target.spec_json());
      emit(c.out, doc.dump(2) + "\n", out);
    } else if (*gen_cmd) {
      SequenceSpec spec;
      if (!spec_json.empty()) {
        spec = io::sequence_from_json(io::parse_spec_text(spec_json, "sequence"));
      } else {
        if (kind.empty()) throw ArgumentError("generate needs --kind or --spec");
        spec.kind = parse_sequence_kind(kind);
        spec.n = n;
        spec.dim = dim;
        spec.seed = seed;
        spec.delta = delta;
        spec.step = step;
        if (!c.target.empty()) {
          spec.target = io::parse_target(c.target);
          spec.dim = spec.target->dim();
        }
      }
      std::ostringstream text;
      io::write_sample_csv(text, generate(spec));
      emit(c.out, text.str(), out);
    } else if (*wass_cmd) {
      const Target target = io::parse_target(c.target);
      if (!target.cdf()) {
        throw ArgumentError("target '" + target.kind() + "' has no univariate CDF");
      }
      const Sample sample = io::read_sample_csv(c.sample, c.weighted);
      const json doc = {{"schema", io::kSchemaVersion},
                        {"wasserstein", univariate_wasserstein(sample, *target.cdf())},
                        {"n", sample.size()},
                        {"target", json::parse(target.spec_json())}};
      emit(c.out, doc.dump(2) + "\n", out);
    } else if (*exp_cmd) {
      namespace ex = experiments;
      if (name == "fig1") {
        ex::Fig1Config config;
        if (!ns_text.empty()) config.ns = parse_int_list(ns_text);
        if (!seeds_text.empty()) config.seeds = parse_seed_list(seeds_text);
        const auto result = ex::run_fig1(config);
        ex::write_fig1(config, result, out_dir);
        out << "fig1: target slope " << result.on_target.fit.slope << ", single-component slope "
            << result.off_target.fit.slope << "\n";
      } else if (name == "fig2") {
        ex::Fig2Config config;
        if (!dims_text.empty()) config.dims = parse_int_list(dims_text);
        if (!ns_text.empty()) config.ns = parse_int_list(ns_text);
        if (exp_cmd->count("--seed")) config.seed = seed;
        ex::write_fig2(config, ex::run_fig2(config), out_dir);
        out << "fig2: wrote " << (std::filesystem::path(out_dir) / "fig2_kernel_choice.csv").string()
            << "\n";
      } else if (name == "table1") {
        PowerStudyConfig config = ex::default_table1_config();
        if (!dims_text.empty()) config.dims = parse_int_list(dims_text);
        if (trials > 0) config.trials = trials;
        if (exp_cmd->count("--n")) config.n = n;
        if (exp_cmd->count("--B")) config.replicates = replicates;
        if (exp_cmd->count("--alpha")) config.alpha = alpha;
        if (exp_cmd->count("--seed")) config.seed = seed;
        const auto cells = power_study(config);
        ex::write_table1(config, cells, out_dir);
        for (const auto& cell : cells) {
          out << cell.kernel << " d=" << cell.dim << " power=" << cell.power << "\n";
        }
      } else if (name == "bbis") {
        ex::BbisConfig config;
        if (!dims_text.empty()) config.dims = parse_int_list(dims_text);
        if (trials > 0) config.trials = trials;
        if (exp_cmd->count("--n")) config.n = n;
        if (exp_cmd->count("--seed")) config.seed = seed;
        const auto rows = ex::run_bbis(config);
        ex::write_bbis(config, rows, out_dir);
        for (const auto& s : ex::summarize_bbis(rows)) {
          out << "d=" << s.dim << " uniform=" << s.mean_uniform << " imq=" << s.mean_imq
              << " gaussian=" << s.mean_gaussian << "\n";
        }
      } else if (name == "ula_tuning") {
        ex::UlaTuningConfig config;
        if (!steps_text.empty()) config.steps = parse_double_list(steps_text);
        if (!seeds_text.empty()) config.seeds = parse_seed_list(seeds_text);
        if (exp_cmd->count("--n")) config.n = n;
        const auto result = ex::run_ula_tuning(config);
        ex::write_ula_tuning(config, result, out_dir);
        out << "ula_tuning: selected step " << result.steps[result.best_index] << "\n";
      } else if (name == "bounded_score") {
        ex::BoundedScoreConfig config;
        if (!ns_text.empty()) config.ns = parse_int_list(ns_text);
        const auto rows = ex::run_bounded_score(config);
        ex::write_bounded_score(config, rows, out_dir);
        for (const auto& r : rows) out << "n=" << r.n << " ksd=" << r.ksd << "\n";
      }
    }
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ksd::cli
