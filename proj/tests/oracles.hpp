#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14, int depth = 60) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// P(a, x) by quadrature of the gamma density. For a < 1 the substitution
/// t = s^(1/a) removes the singularity at zero.
inline double gamma_cdf(double a, double x) {
  if (x <= 0.0) return 0.0;
  double integral = 0.0;
  if (a < 1.0) {
    const double upper = std::pow(x, a);
    // Split so the adaptive rule sees the fast initial decay.
    const double mid = std::min(upper, 1.0);
    auto f = [a](double s) { return std::exp(-std::pow(s, 1.0 / a)) / a; };
    integral = integrate(f, 0.0, mid) + integrate(f, mid, upper);
  } else {
    auto f = [a](double t) { return t <= 0.0 ? (a == 1.0 ? 1.0 : 0.0) : std::exp((a - 1.0) * std::log(t) - t); };
    const double mode = std::min(x, std::max(a - 1.0, 1e-3));
    integral = integrate(f, 0.0, mode) + integrate(f, mode, x);
  }
  return integral / std::tgamma(a);
}

/// FGM copula, written out directly.
inline double fgm(const std::vector<double>& v, double theta) {
  double prod = 1.0;
  double tail = 1.0;
  for (double x : v) {
    prod *= x;
    tail *= 1.0 - x;
  }
  return prod + theta * prod * tail;
}

/// d/dv_i of the trivariate Frank copula as printed:
/// C = -(1/θ) log(1 + Π a_j / D) with a_j = e^{-θ v_j} - 1 and D = (e^{-θ} - 1)^2.
inline double frank3_partial(const std::vector<double>& v, double theta, int i) {
  std::vector<double> a(3);
  for (int j = 0; j < 3; ++j) a[j] = std::expm1(-theta * v[j]);
  const double d = std::pow(std::expm1(-theta), 2);
  const double p = a[0] * a[1] * a[2];
  double others = 1.0;
  for (int j = 0; j < 3; ++j) {
    if (j != i) others *= a[j];
  }
  return std::exp(-theta * v[i]) * others / (d + p);
}

/// P(max_i I_i X_i <= x) for independent indicators by summing over which
/// policies claim. `joint_cdf(mask)` returns P(X_i <= x for every i in mask).
inline double max_claim_cdf(const std::vector<double>& p,
                            const std::function<double(unsigned)>& joint_cdf) {
  const unsigned n = static_cast<unsigned>(p.size());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double w = 1.0;
    for (unsigned i = 0; i < n; ++i) w *= (mask >> i & 1u) ? p[i] : 1.0 - p[i];
    total += w * joint_cdf(mask);
  }
  return total;
}

/// Kolmogorov-type sup distance between the empirical cdf of `draws` and
/// `cdf`, evaluated at every point of `grid`.
inline double ecdf_sup_gap(std::vector<double> draws, const std::vector<double>& grid,
                           const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  double worst = 0.0;
  for (double x : grid) {
    const auto below = std::upper_bound(draws.begin(), draws.end(), x) - draws.begin();
    const double ecdf = static_cast<double>(below) / static_cast<double>(draws.size());
    worst = std::max(worst, std::fabs(ecdf - cdf(x)));
  }
  return worst;
}

/// Partial sums of the k smallest entries.
inline std::vector<double> ascending_partial_sums(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  std::partial_sum(x.begin(), x.end(), x.begin());
  return x;
}

/// Partial sums of the k largest entries.
inline std::vector<double> descending_partial_sums(std::vector<double> x) {
  std::sort(x.begin(), x.end(), std::greater<>());
  std::partial_sum(x.begin(), x.end(), x.begin());
  return x;
}

}  // namespace oracle
