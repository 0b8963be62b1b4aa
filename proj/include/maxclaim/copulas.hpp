#pragma once

// Dependence structures: independence, FGM, Ali-Mikhail-Haq, Gumbel-Hougaard
// and the trivariate Frank copula, plus grid-based numeric checkers for the
// copula properties the ordering results assume.

#include "maxclaim/condition_report.hpp"
#include "maxclaim/random.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <variant>

namespace maxclaim {

inline constexpr int kMaxDimension = 20;

/// Stack-allocated point of the unit cube.
using CubePoint = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;
using CubeRef = Eigen::Ref<const Eigen::VectorXd>;

struct IndependenceCopula {
  int dimension;
};
struct FgmCopula {
  int dimension;
  double theta;
};
struct AmhCopula {
  double theta;
};
struct GumbelHougaardCopula {
  double theta;
};
struct Frank3Copula {
  double theta;
};
/// User-supplied function, differentiated numerically. Used to probe the
/// checkers with laws that are not in the built-in list.
struct CustomCopula {
  int dimension;
  std::string name;
  std::function<double(const CubeRef&)> eval;
};

class Copula {
 public:
  using Family = std::variant<IndependenceCopula, FgmCopula, AmhCopula,
                              GumbelHougaardCopula, Frank3Copula, CustomCopula>;

  static Copula independence(int dimension);
  static Copula fgm(int dimension, double theta);
  static Copula amh(double theta);
  static Copula gumbel_hougaard(double theta);
  static Copula frank3(double theta);
  static Copula custom(int dimension, std::string name,
                       std::function<double(const CubeRef&)> eval);

  int dimension() const;
  const Family& family() const { return family_; }
  std::string family_name() const;
  std::string describe() const;
  /// True for families with closed-form partial derivatives.
  bool has_analytic_partials() const;

  /// C(v). Throws std::invalid_argument on a dimension mismatch or a point
  /// outside the unit cube.
  double eval(const CubeRef& v) const;

  /// ∂C/∂v_i (zero-based i) at an interior point. Closed form where
  /// available, otherwise a central difference with step 1e-6 that falls back
  /// to one-sided near the cube boundary.
  double partial(const CubeRef& v, int i) const;

  /// Central-difference ∂C/∂v_i regardless of family (for cross-checks).
  double partial_numeric(const CubeRef& v, int i, double step = 1e-6) const;

  bool operator==(const Copula& other) const;

 private:
  explicit Copula(Family f) : family_(std::move(f)) {}
  double eval_unchecked(const CubeRef& v) const;
  Family family_;
};

inline constexpr double kClosedFormTolerance = 1e-9;
inline constexpr double kFiniteDifferenceTolerance = 1e-6;
inline constexpr int kDefaultResolution2d = 101;
inline constexpr int kDefaultResolution3d = 41;

int default_resolution(int dimension);

/// C(v) ≥ v1 v2 on a uniform grid (dimension 2 only).
ConditionReport is_pqd(const Copula& c, int grid_resolution = kDefaultResolution2d,
                       double tol = kClosedFormTolerance);

/// Exchangeability under adjacent coordinate swaps at a fixed-seed sample of
/// grid points.
ConditionReport check_symmetry(const Copula& c, int grid_resolution,
                               double tol = kClosedFormTolerance);

/// ∂C/∂v1 ≥ ∂C/∂v2 on the interior grid points with v1 ≤ v2 ≤ ... ≤ vn.
ConditionReport check_partial_ordering(const Copula& c, int grid_resolution);

/// Both parts of the Schur-concavity characterisation; `passed` requires
/// both. The individual parts are available separately above.
ConditionReport is_schur_concave(const Copula& c, int grid_resolution);

/// c1(v) ≤ c2(v) on a uniform grid.
ConditionReport plod_less(const Copula& c1, const Copula& c2, int grid_resolution,
                          double tol = kClosedFormTolerance);

/// Groundedness, uniform margins and non-negative volume of random
/// axis-aligned boxes.
ConditionReport check_axioms(const Copula& c, int sample_count, std::uint64_t seed = 17,
                             double tol = 1e-10);

/// One draw by sequential conditional inversion (dimension 2 or 3).
CubePoint conditional_sample(const Copula& c, Rng& rng);

}  // namespace maxclaim
