#pragma once

#include <stdexcept>
#include <string>

namespace ksd {

/// Invalid arguments: dimension mismatches, out-of-range parameters, bad specs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is well-formed but admits no meaningful answer
/// (e.g. identical points for the median heuristic, a zero discrepancy).
class DegenerateInputError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Non-finite or impossible numerical results (negative quadratic forms,
/// divergent chains).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A memory budget or attempt cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ksd
