#pragma once

#include <stdexcept>

namespace maxclaim {

/// Thrown when an iterative special-function evaluation fails to converge.
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
///
/// Series expansion for x < a + 1, Lentz continued fraction for the
/// complement otherwise. Relative termination 1e-14, at most 500 iterations;
/// throws NumericFault if that budget is exhausted.
double regularized_lower_incomplete_gamma(double a, double x);

/// Complement Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_upper_incomplete_gamma(double a, double x);

}  // namespace maxclaim
