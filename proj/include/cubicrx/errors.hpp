#pragma once

#include <stdexcept>
#include <string>

namespace cubicrx {

// Raised when a numerical procedure cannot produce a trustworthy result
// (no root in the admissible range, quadrature not converged, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The three-moment system has no LP3 solution.
class NoSolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A raw moment of order n does not exist (n * beta >= 1).
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The density is unbounded at the requested point.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad or inconsistent user configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cubicrx
