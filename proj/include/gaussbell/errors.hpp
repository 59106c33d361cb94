#pragma once

#include <stdexcept>
#include <string>

namespace gaussbell {

/// Input violates a documented precondition (bad flag, negative temperature, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but outside the numerical domain of an operation
/// (singular covariance, unphysical symplectic spectrum).
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A truncated series or quadrature could not reach its requested tolerance.
/// Carries the best error estimate that was achieved.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : std::runtime_error(what + " (estimated error " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace gaussbell
