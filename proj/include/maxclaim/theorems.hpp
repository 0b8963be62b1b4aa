#pragma once

// Ordering results for the largest claim as hypothesis checklists plus a
// conclusion check. Portfolio A is always the starred portfolio (the one
// claimed to be stochastically smaller); B is the reference portfolio.

#include "maxclaim/claims.hpp"
#include "maxclaim/condition_report.hpp"
#include "maxclaim/majorize.hpp"

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace maxclaim {

/// Strictly increasing reparameterisation of claim probabilities.
class HFunction {
 public:
  enum class Kind { kIdentity, kSqrt, kLogShift2, kTabulated };

  static HFunction identity();
  static HFunction sqrt();
  /// h(p) = log(p + 2).
  static HFunction log_shift2();
  /// Piecewise-linear interpolation of strictly increasing (p, h(p)) knots
  /// with p in (0, 1].
  static HFunction tabulated(std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  std::string name() const;
  /// Domain of p; (0, 1] for the closed forms, the knot span when tabulated.
  std::pair<double, double> domain() const;
  /// Closure of the image of the domain.
  std::pair<double, double> range() const;

  double eval(double p) const;
  double inverse(double u) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& p) const;

  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  Kind kind_ = Kind::kIdentity;
  std::vector<std::pair<double, double>> knots_;
};

inline double h_eval(const HFunction& h, double p) { return h.eval(p); }
inline double h_inverse(const HFunction& h, double u) { return h.inverse(u); }

inline constexpr double kHCheckTolerance = 1e-9;

/// Evenly spaced grid over the h domain, avoiding p = 0.
Eigen::VectorXd default_h_grid(const HFunction& h, int points = 200);

/// Strict increase, concavity, and log-concavity of the inverse, checked by
/// divided differences on the grid and on its image.
ConditionReport check_h_conditions(const HFunction& h, const Eigen::VectorXd& grid,
                                   double tol = kHCheckTolerance);

/// Strict increase alone.
ConditionReport check_h_increasing(const HFunction& h, const Eigen::VectorXd& grid);

enum class TheoremId { T1, T2, T3, T5, T6, T7, T8, T9, T10, T11, T12, T13, T14, T15, T16, T17 };

const char* to_string(TheoremId id);
std::optional<TheoremId> parse_theorem_id(std::string_view text);
const std::vector<TheoremId>& all_theorems();

/// Theorem and scenario disagree on dimension or indicator model.
class ScenarioShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  Portfolio a;  // starred
  Portfolio b;
  HFunction h = HFunction::identity();
  /// Absolute tolerance for the majorization and weak-majorization
  /// hypotheses on the parameter vectors.
  double majorization_tolerance = kMajorizationTolerance;
  GridSpec grid;
};

struct HypothesisReport {
  TheoremId theorem = TheoremId::T1;
  std::vector<ConditionReport> conditions;
  bool all_passed = true;

  const ConditionReport* find(std::string_view name) const;
};

struct TheoremVerdict {
  HypothesisReport hypotheses;
  bool conclusion_confirmed = false;
  OrderVerdict verdict;
};

HypothesisReport check_hypotheses(TheoremId id, const Scenario& s);

/// Checks the hypotheses, then compares the two largest-claim laws on the
/// scenario grid whatever the hypotheses say. The conclusion is confirmed
/// when B dominates A or the two are indistinguishable.
TheoremVerdict verify_theorem(TheoremId id, const Scenario& s);

}  // namespace maxclaim
