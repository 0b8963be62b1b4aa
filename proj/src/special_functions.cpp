#include "maxclaim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace maxclaim {
namespace {

constexpr double kEpsilon = 1e-14;
constexpr int kMaxIterations = 500;

void require_domain(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("incomplete gamma: shape must be positive, got " +
                            std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("incomplete gamma: argument must be non-negative, got " +
                            std::to_string(x));
  }
}

// P(a, x) by the series x^a e^{-x} / Γ(a+1) * Σ x^k / ((a+1)...(a+k)).
double lower_series(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= kMaxIterations; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) {
      return std::exp(a * std::log(x) - x - std::lgamma(a + 1.0)) * sum;
    }
  }
  throw NumericFault("incomplete gamma series did not converge (a=" + std::to_string(a) +
                     ", x=" + std::to_string(x) + ")");
}

// Q(a, x) by the modified Lentz evaluation of the Legendre continued fraction.
double upper_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) {
      return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
    }
  }
  throw NumericFault("incomplete gamma continued fraction did not converge (a=" +
                     std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

}  // namespace

double regularized_lower_incomplete_gamma(double a, double x) {
  require_domain(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_continued_fraction(a, x);
}

double regularized_upper_incomplete_gamma(double a, double x) {
  require_domain(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_continued_fraction(a, x);
}

}  // namespace maxclaim
