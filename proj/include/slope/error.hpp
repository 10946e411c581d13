#pragma once

#include <stdexcept>
#include <string>

namespace slope {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the open chart domain, malformed sample, or bad argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery failed: quadrature did not converge, a bracket could
/// not be expanded, a root finder gave up.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : NumericalError(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// The requested object does not exist for this data (e.g. a score interval
/// whose level crossing is never reached).
class NonexistenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A generalized estimator violates a defining restriction (zero variance,
/// negative score covariance, bias where unbiasedness is required).
class EstimatorError : public Error {
 public:
  using Error::Error;
};

}  // namespace slope
