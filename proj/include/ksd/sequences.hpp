#pragma once

#include <cstdint>
#include <string>

#include "ksd/targets.hpp"
#include "ksd/types.hpp"

namespace ksd {

/// Every generator draws from its own CounterRng stream keyed by
/// (seed, stream_id("sequences/<name>")), so outputs are pure functions of
/// their arguments and identical across platforms.

/// n i.i.d. rows from N(mean, I), uniform weights.
Sample iid_gaussian(int n, const Vector& mean, std::uint64_t seed);
inline Sample iid_gaussian(int n, int dim, std::uint64_t seed) {
  return iid_gaussian(n, Vector::Zero(dim), seed);
}

/// i.i.d. from the symmetric two-component mixture at +/- delta e1.
Sample mixture_iid(int n, int dim, double delta, std::uint64_t seed);

/// i.i.d. from the single component N(-delta e1, I).
Sample single_component(int n, int dim, double delta, std::uint64_t seed);

struct PackingOptions {
  /// Consecutive rejections tolerated before the substream is re-seeded.
  long max_consecutive_rejections = 1'000'000;
  /// Number of re-seeded retries after a stall.
  int restarts = 1;
};

/// Points uniform in the ball of radius 2 n^{1/d} log n with pairwise
/// distances strictly greater than 2 log n, found by rejection sampling.
/// Throws ResourceError reporting the achieved count if acceptance stalls
/// on every attempt.
Sample packing(int n, int dim, std::uint64_t seed, const PackingOptions& options = {});

/// Radius and minimum separation used by packing().
double packing_radius(int n, int dim);
double packing_separation(int n);

/// x_i = i n e1 for i = 1..n, uniform weights.
Sample bounded_score_line(int n, int dim);

/// Unadjusted Langevin chain x_{t+1} = x_t + (step/2) b(x_t) + sqrt(step) xi_t.
/// Returns the n iterates after x0 (x0 itself is excluded).
/// Throws NumericalError naming the step if |x_t| exceeds 1e8.
Sample ula_chain(const Target& target, int n, double step, const Vector& x0, std::uint64_t seed);

/// Shifted alternative x_i = z_i + u_i e1 with z_i ~ N(0, I), u_i ~ U[0, 1].
Sample shifted_gaussian(int n, int dim, double shift_scale, std::uint64_t seed);

}  // namespace ksd

#include <optional>

namespace ksd {

/// Declarative description of a generated sample.
struct SequenceSpec {
  enum class Kind { kIidGaussian, kMixtureIid, kSingleComponent, kPacking, kBoundedScoreLine, kUlaChain };
  Kind kind = Kind::kIidGaussian;
  int n = 1;
  int dim = 1;
  std::uint64_t seed = 0;
  double delta = 1.5;
  double step = 0.1;
  /// Start of the ULA chain; zero when empty.
  Vector x0;
  /// Target driving the ULA chain.
  std::optional<Target> target;
};

std::string to_string(SequenceSpec::Kind kind);
SequenceSpec::Kind parse_sequence_kind(const std::string& text);

/// Dispatches to the generator named by spec.kind.
Sample generate(const SequenceSpec& spec);

}  // namespace ksd
