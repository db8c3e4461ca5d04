#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infoineq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or node lies outside an open parameter domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or hyperparameter (unknown catalog name, bad order, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Quadrature or lattice summation did not reach its tolerance, or hit a NaN.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A second moment that should be finite looks divergent.
class DivergentMoment : public Error {
 public:
  using Error::Error;
};

/// Support containment required by a divided-difference score is violated.
class SupportViolation : public Error {
 public:
  using Error::Error;
};

/// Escort synthesis produced a kernel that is not a valid density.
class NoValidEscort : public Error {
 public:
  using Error::Error;
};

/// Root bracketing or another small solver failed.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive definite is not. `pivot` is 1-based.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, std::size_t pivot)
      : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace infoineq
