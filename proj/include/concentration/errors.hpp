#pragma once

#include <stdexcept>
#include <string>

namespace conc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution specification that cannot describe a valid law.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Bad arguments: NaNs, sizes out of range, ragged matrices, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Quadrature (or another numerical routine) did not reach its target accuracy.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// mu_p == 0: the norm is almost surely zero and no rate is defined.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

/// The second-order expansion needs a finite second derivative at mu.
class SingularExpansion : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of the requested result does not hold for the inputs.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

/// The requested simulation does not fit the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace conc
