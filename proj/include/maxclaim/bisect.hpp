#pragma once

#include <cmath>

namespace maxclaim {

/// Root of a non-decreasing `f(x) - target` on [lo, hi] by bisection.
///
/// Stops after `max_iter` halvings or once the bracket is narrower than
/// `width_tol * max(1, |hi|)`. Returns the bracket midpoint.
template <typename F>
double bisect_increasing(F&& f, double target, double lo, double hi, double width_tol,
                         int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    if (hi - lo <= width_tol * std::fmax(1.0, std::fabs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace maxclaim
