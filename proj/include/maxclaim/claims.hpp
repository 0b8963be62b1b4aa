#pragma once

// Portfolio model Y_i = I_i X_i and the law of the largest claim Y_{n:n}.

#include "maxclaim/copulas.hpp"
#include "maxclaim/margins.hpp"
#include "maxclaim/random.hpp"

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace maxclaim {

/// Independent Bernoulli occurrence indicators with success probabilities p.
struct IndependentIndicators {
  Eigen::VectorXd p;
};

/// Joint law of a pair of indicators, indexed p(I1, I2).
struct JointPairIndicators {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;
};

using IndicatorModel = std::variant<IndependentIndicators, JointPairIndicators>;

inline constexpr double kPmfTolerance = 1e-12;
inline constexpr int kMaxMixtureDimension = 20;

/// Margins, copula and indicator model of one portfolio. The constructor
/// enforces matching dimensions and the indicator invariants.
class Portfolio {
 public:
  Portfolio(std::vector<Margin> margins, Copula copula, IndicatorModel indicators);

  int size() const { return static_cast<int>(margins_.size()); }
  const std::vector<Margin>& margins() const { return margins_; }
  const Copula& copula() const { return copula_; }
  const IndicatorModel& indicators() const { return indicators_; }
  bool has_independent_indicators() const {
    return std::holds_alternative<IndependentIndicators>(indicators_);
  }
  /// Lambda parameter of every margin, in policy order.
  Eigen::VectorXd lambdas() const;
  /// Claim probabilities (marginal, for the joint model).
  Eigen::VectorXd claim_probabilities() const;

  Portfolio with_margins(std::vector<Margin> margins) const;
  Portfolio with_copula(Copula copula) const;
  Portfolio with_indicators(IndicatorModel indicators) const;

 private:
  std::vector<Margin> margins_;
  Copula copula_;
  IndicatorModel indicators_;
};

/// P(Y_{n:n} <= x) by summing p(μ) C([F_1(x)]^{μ_1}, ..., [F_n(x)]^{μ_n}) over
/// μ ∈ {0,1}^n. Zero for x < 0.
double cdf_max(const Portfolio& pf, double x);

/// Closed bivariate form Π(1 - p_i F̄_i) + p1 p2 [C(F1, F2) - F1 F2]
/// (independent indicators, n = 2).
double cdf_max_pair_closed(const Portfolio& pf, double x);

/// p00 + p11 C(F1, F2) + p01 F2 + p10 F1 (joint indicators, n = 2).
double cdf_max_joint_pair(const Portfolio& pf, double x);

/// Exact cdf using the closed form that matches the portfolio shape.
double cdf_max_exact(const Portfolio& pf, double x);

inline double survival_max(const Portfolio& pf, double x) { return 1.0 - cdf_max_exact(pf, x); }

struct LwsaiReport {
  bool passed = false;
  double p10 = 0.0;
  double p01 = 0.0;
};

/// The joint indicator pair is arranged-increasing in the left-tail sense iff
/// p(1,0) <= p(0,1).
LwsaiReport lwsai_check(const JointPairIndicators& ind);

/// One draw of Y_{n:n} (n in {2, 3}).
double sample_max(const Portfolio& pf, Rng& rng);

// ---------------------------------------------------------------------------
// Usual stochastic order verdicts

enum class OrderRelation {
  kAStDominatesB,
  kBStDominatesA,
  kCrossing,
  kIndistinguishable,
};

const char* to_string(OrderRelation r);

inline constexpr double kDominanceTolerance = 1e-12;
inline constexpr double kCrossingTolerance = 1e-10;
inline constexpr int kDefaultGridPoints = 2001;
inline constexpr double kDefaultQuantileLow = 1e-4;
inline constexpr double kDefaultQuantileHigh = 0.9999;

struct GridSpec {
  int points = kDefaultGridPoints;
  double q_low = kDefaultQuantileLow;
  double q_high = kDefaultQuantileHigh;
};

/// Comparison of the survival functions S_A, S_B of two largest-claim laws.
struct OrderVerdict {
  OrderRelation relation = OrderRelation::kIndistinguishable;
  /// max over the grid of S_A - S_B and of S_B - S_A (each clamped at 0).
  double max_gap_a_over_b = 0.0;
  double max_gap_b_over_a = 0.0;
  /// Midpoint of the first bracket where the sign of S_B - S_A flips.
  double crossing_location = 0.0;
  std::string grid;
};

/// Equal-weight mixture of every margin of both portfolios, inverted at q.
double mixture_quantile(const Portfolio& a, const Portfolio& b, double q);

/// Geometric grid between the q_low and q_high mixture quantiles.
Eigen::VectorXd default_grid(const Portfolio& a, const Portfolio& b, const GridSpec& spec = {});

struct SurvivalCurves {
  Eigen::VectorXd x;
  Eigen::VectorXd survival_a;
  Eigen::VectorXd survival_b;
};

SurvivalCurves survival_curves(const Portfolio& a, const Portfolio& b, const Eigen::VectorXd& grid);

OrderVerdict classify(const SurvivalCurves& curves);

OrderVerdict st_compare(const Portfolio& a, const Portfolio& b, const Eigen::VectorXd& grid);

}  // namespace maxclaim
