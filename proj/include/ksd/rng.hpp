#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ksd {

/// Counter-based 64-bit generator.
///
/// Output k of stream (seed, stream) is mix64(key + (k + 1) * golden), where
/// key = mix64(seed ^ mix64(stream)) and mix64 is the SplitMix64 finalizer.
/// Everything is integer arithmetic, so draws are identical on every platform.
/// Normal and uniform variates are produced here as well rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();

  /// Jump to an absolute counter position; drops any cached normal.
  void seek(std::uint64_t counter);
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t mix64(std::uint64_t z);

/// Stable stream identifier derived from a (module, operation) label and an
/// optional index such as a trial number. FNV-1a over the label.
std::uint64_t stream_id(std::string_view label, std::uint64_t index = 0);

}  // namespace ksd
