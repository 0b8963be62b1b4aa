#pragma once

// Vector preorders used as hypotheses of the ordering results: weak
// sub/super-majorization, majorization, and the "oppositely ordered" set S.
//
// All predicates accept any Eigen dense vector expression and are templated
// on its scalar type. Partial sums are compared with an absolute tolerance
// (kMajorizationTolerance unless overridden).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxclaim {

using RealVector = Eigen::VectorXd;

inline constexpr double kMajorizationTolerance = 1e-12;

namespace detail {

template <typename DerivedX, typename DerivedY>
void require_same_length(const Eigen::DenseBase<DerivedX>& x,
                         const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("vector preorder: length mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sorted_ascending(
    const Eigen::DenseBase<Derived>& v) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out = v;
  std::sort(out.data(), out.data() + out.size());
  return out;
}

}  // namespace detail

/// Entries in non-increasing order; ties keep their original relative order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sort_descending(
    const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return v(a) > v(b);
  });
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(order[static_cast<std::size_t>(i)]);
  return out;
}

/// Largest amount by which some tail sum of the largest entries of x exceeds
/// the matching tail sum of y. Zero or negative means x is weakly
/// submajorized by y.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar submajorization_excess(const Eigen::DenseBase<DerivedX>& x,
                                                 const Eigen::DenseBase<DerivedY>& y) {
  detail::require_same_length(x, y);
  const auto xs = detail::sorted_ascending(x);
  const auto ys = detail::sorted_ascending(y);
  using Scalar = typename DerivedX::Scalar;
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  Scalar sx{0}, sy{0};
  for (Eigen::Index j = xs.size() - 1; j >= 0; --j) {
    sx += xs(j);
    sy += ys(j);
    worst = std::max(worst, sx - sy);
  }
  return worst;
}

/// Largest amount by which some partial sum of the smallest entries of x
/// falls short of the matching partial sum of y. Zero or negative means x is
/// weakly supermajorized by y.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar supermajorization_deficit(const Eigen::DenseBase<DerivedX>& x,
                                                    const Eigen::DenseBase<DerivedY>& y) {
  detail::require_same_length(x, y);
  const auto xs = detail::sorted_ascending(x);
  const auto ys = detail::sorted_ascending(y);
  using Scalar = typename DerivedX::Scalar;
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  Scalar sx{0}, sy{0};
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    sx += xs(j);
    sy += ys(j);
    worst = std::max(worst, sy - sx);
  }
  return worst;
}

/// Violation measure for x majorized by y: the larger of the total mismatch
/// and the supermajorization deficit.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar majorization_violation(const Eigen::DenseBase<DerivedX>& x,
                                                 const Eigen::DenseBase<DerivedY>& y) {
  detail::require_same_length(x, y);
  using std::abs;
  const auto total_gap = abs(x.sum() - y.sum());
  return std::max(total_gap, supermajorization_deficit(x, y));
}

template <typename DerivedX, typename DerivedY>
bool weakly_submajorized(const Eigen::DenseBase<DerivedX>& x,
                         const Eigen::DenseBase<DerivedY>& y,
                         double tol = kMajorizationTolerance) {
  return submajorization_excess(x, y) <= tol;
}

template <typename DerivedX, typename DerivedY>
bool weakly_supermajorized(const Eigen::DenseBase<DerivedX>& x,
                           const Eigen::DenseBase<DerivedY>& y,
                           double tol = kMajorizationTolerance) {
  return supermajorization_deficit(x, y) <= tol;
}

template <typename DerivedX, typename DerivedY>
bool majorized(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y,
               double tol = kMajorizationTolerance) {
  return majorization_violation(x, y) <= tol;
}

/// Largest product (a_i - a_j)(b_i - b_j) over all pairs. Non-positive means
/// a and b are oppositely ordered.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar opposite_order_violation(const Eigen::DenseBase<DerivedA>& a,
                                                   const Eigen::DenseBase<DerivedB>& b) {
  detail::require_same_length(a, b);
  typename DerivedA::Scalar worst{0};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = i + 1; j < a.size(); ++j) {
      worst = std::max(worst, (a(i) - a(j)) * (b(i) - b(j)));
    }
  }
  return worst;
}

/// Membership of (a, b) in S: every pair of coordinates is oppositely ordered.
template <typename DerivedA, typename DerivedB>
bool in_S(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  return opposite_order_violation(a, b) <= 0;
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& v) {
  return v.derived().array().isFinite().all();
}

}  // namespace maxclaim
