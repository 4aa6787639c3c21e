#pragma once

#include <stdexcept>
#include <string>

namespace monolab {

/// Raised when a caller violates an operation's precondition
/// (bad length, probability out of range, infeasible parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed configuration files or flag values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when reading or writing an artifact file fails.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a checked mathematical invariant does not hold. This always
/// indicates a defect in the implementation, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace monolab
