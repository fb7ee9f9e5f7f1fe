#pragma once

#include <stdexcept>
#include <string>

namespace pac {

/// Raised when an operation's input violates its documented contract.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for inconsistent experiment descriptions (boundary tags, loads,
/// targets, flow parameters).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The time step makes the phase-field subproblem non-coercive.
class TimeStepError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pac
