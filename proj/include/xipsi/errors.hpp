#pragma once

#include <stdexcept>
#include <string>

namespace xipsi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Input that should describe a copula violates a copula constraint.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// Root finding was asked to work on an interval without a sign change.
class NotBracketedError : public Error {
public:
  using Error::Error;
};

/// An iterative method stopped before meeting its tolerance. Carries the best
/// estimate found so far together with the error it actually achieved.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double best_estimate, double achieved_tol)
      : Error(what), best_estimate_(best_estimate), achieved_tol_(achieved_tol) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_tol() const noexcept { return achieved_tol_; }

private:
  double best_estimate_;
  double achieved_tol_;
};

}  // namespace xipsi
