#pragma once

#include <stdexcept>
#include <string>

namespace kslog {

// Invalid configuration: bad grid sizes, out-of-range model parameters.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a scalar function (e.g. u < 0).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Caller misuse, such as mixing fields from different grids.
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// A documented precondition on an operation's inputs failed.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The grid cannot resolve the requested feature (e.g. an eta sweep ran
// below two cells).
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-system failures in the harness.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kslog
