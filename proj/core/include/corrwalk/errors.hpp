#pragma once

#include <stdexcept>
#include <string>

namespace corrwalk {

/// Argument outside an operation's precondition (bad probability, Hurst
/// exponent outside the supported range, negative time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation that was well-posed but failed numerically: root bracket
/// lost, factorization failure, degenerate estimator input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few samples for an estimator.
class InsufficientDataError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The requested correlation target exceeds the maximal attainable phi
/// coefficient.
class InfeasibleTargetError : public NumericError {
 public:
  InfeasibleTargetError(double target, double sigma_max);

  double target() const noexcept { return target_; }
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  double target_;
  double sigma_max_;
};

/// A uniform draw mapped to an infeasible target under the `error` policy.
class InfeasibleUniformError : public NumericError {
 public:
  InfeasibleUniformError(double u, double sigma_max);

  double u() const noexcept { return u_; }
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  double u_;
  double sigma_max_;
};

}  // namespace corrwalk
