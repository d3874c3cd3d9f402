#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "ksd/diagnostics.hpp"
#include "ksd/gof.hpp"
#include "ksd/kernels.hpp"
#include "ksd/reweight.hpp"
#include "ksd/targets.hpp"
#include "ksd/types.hpp"

// Experiment drivers shared by the CLI and the acceptance suite. Each run_*
// function is deterministic in its config; each write_* function emits CSV
// plus a <name>_manifest.json next to it.
namespace ksd::experiments {

using Generator = std::function<Sample(int n, std::uint64_t seed)>;

/// Rounded 10^e for e = lo, lo + step, ..., hi.
std::vector<int> log_grid(double lo_exponent, double hi_exponent, double step);

double median(std::vector<double> values);

struct DecayCurve {
  std::vector<int> ns;
  /// per_seed[k][s] is the discrepancy at ns[k] for seed s.
  std::vector<std::vector<double>> per_seed;
  std::vector<double> medians;
  DecayFit fit;
};

/// Per seed, draws one sample of size max(ns) and evaluates the discrepancy
/// on each prefix of length ns[k]; reports medians across seeds and the
/// log-log slope of the medians.
DecayCurve ksd_decay(const Target& target, const RadialKernel& kernel, const Generator& generator,
                     const std::vector<int>& ns, const std::vector<std::uint64_t>& seeds);

// --- fig1: mixture target, on- and off-target sequences in d = 1 -------------

struct Fig1Config {
  double delta = 1.5;
  std::vector<int> ns = log_grid(2.0, 4.0, 0.5);
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int function_n = 1000;
  int grid_points = 241;
  double grid_lo = -6.0;
  double grid_hi = 6.0;
};

struct Fig1Result {
  DecayCurve on_target;
  DecayCurve off_target;
  /// Wasserstein distances, same layout as DecayCurve::per_seed.
  std::vector<std::vector<double>> on_wasserstein;
  std::vector<std::vector<double>> off_wasserstein;
  std::vector<double> grid;
  std::vector<double> g_on, h_on, g_off, h_off;
};

Fig1Result run_fig1(const Fig1Config& config);
void write_fig1(const Fig1Config& config, const Fig1Result& result,
                const std::filesystem::path& dir);

// --- fig2: packing sequences against light- and heavy-tailed kernels --------

struct Fig2Config {
  std::vector<int> dims = {5, 8, 13};
  std::vector<int> ns = {200, 500, 1000, 2000};
  std::uint64_t seed = 1;
  bool include_iid = true;
};

struct Fig2Row {
  std::string sequence;
  std::string kernel;
  int dim = 0;
  int n = 0;
  double ksd = 0.0;
};

/// Kernels: gaussian(h=2), matern32, imq(c=1, beta=-1/2); target N(0, I_d).
std::vector<Fig2Row> run_fig2(const Fig2Config& config);
void write_fig2(const Fig2Config& config, const std::vector<Fig2Row>& rows,
                const std::filesystem::path& dir);

// --- table1: power of the one-sample test ------------------------------------

PowerStudyConfig default_table1_config();
void write_table1(const PowerStudyConfig& config, const std::vector<PowerCell>& cells,
                  const std::filesystem::path& dir);

// --- bbis: KSD-minimizing reweighting ------------------------------------------

struct BbisConfig {
  std::vector<int> dims = {2, 5, 10};
  int n = 100;
  int trials = 100;
  std::uint64_t seed = 1;
  ReweightOptions options;
};

struct BbisRow {
  int dim = 0;
  int trial = 0;
  double mse_uniform = 0.0;
  double mse_imq = 0.0;
  double mse_gaussian = 0.0;
};

struct BbisSummary {
  int dim = 0;
  double mean_uniform = 0.0;
  double mean_imq = 0.0;
  double mean_gaussian = 0.0;
};

/// Target N(0, I_d); IMQ (1 + s/h)^{-1/2} and Gaussian exp(-s/h), both with
/// the median bandwidth of the support points.
std::vector<BbisRow> run_bbis(const BbisConfig& config);
std::vector<BbisSummary> summarize_bbis(const std::vector<BbisRow>& rows);
void write_bbis(const BbisConfig& config, const std::vector<BbisRow>& rows,
                const std::filesystem::path& dir);

// --- ula_tuning: choosing a Langevin step size by KSD ------------------------

struct UlaTuningConfig {
  std::vector<double> steps = {1e-3, 3.1622776601683794e-3, 1e-2, 3.1622776601683794e-2,
                               1e-1, 3.1622776601683794e-1, 1.0};
  int n = 4000;
  int dim = 2;
  double delta = 1.5;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

struct UlaTuningResult {
  std::vector<double> steps;
  /// per_seed[k][s]: IMQ KSD of the chain with steps[k] and seed s.
  std::vector<std::vector<double>> per_seed;
  std::vector<double> medians;
  std::size_t best_index = 0;
};

UlaTuningResult run_ula_tuning(const UlaTuningConfig& config);
void write_ula_tuning(const UlaTuningConfig& config, const UlaTuningResult& result,
                      const std::filesystem::path& dir);

// --- bounded_score: line sequence on the pseudo-Huber target ------------------

struct BoundedScoreConfig {
  std::vector<int> ns = {50, 100, 200, 400, 800};
  int dim = 1;
};

struct BoundedScoreRow {
  int n = 0;
  double ksd = 0.0;
};

std::vector<BoundedScoreRow> run_bounded_score(const BoundedScoreConfig& config);
void write_bounded_score(const BoundedScoreConfig& config, const std::vector<BoundedScoreRow>& rows,
                         const std::filesystem::path& dir);

/// Writes dir/<name>_manifest.json with the experiment name, config, and version.
void write_manifest(const std::filesystem::path& dir, const std::string& name,
                    const nlohmann::json& config);

}  // namespace ksd::experiments
