#include "maxclaim/claims.hpp"

#include "maxclaim/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace maxclaim {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate(const JointPairIndicators& j) {
  for (double v : {j.p00, j.p01, j.p10, j.p11}) {
    require(v >= 0.0 && v <= 1.0, "joint indicator probabilities must lie in [0, 1]");
  }
  require(std::fabs(j.p00 + j.p01 + j.p10 + j.p11 - 1.0) <= kPmfTolerance,
          "joint indicator probabilities must sum to 1");
}

void validate(const IndependentIndicators& ind, int n) {
  require(ind.p.size() == n, "indicator probability count must match the margin count");
  for (Eigen::Index i = 0; i < ind.p.size(); ++i) {
    require(ind.p(i) >= 0.0 && ind.p(i) <= 1.0, "claim probabilities must lie in [0, 1]");
  }
}

Eigen::VectorXd margin_cdfs(const Portfolio& pf, double x) {
  Eigen::VectorXd f(pf.size());
  for (int i = 0; i < pf.size(); ++i) f(i) = pf.margins()[static_cast<std::size_t>(i)].cdf(x);
  return f;
}

// Weight p(μ) of the indicator outcome encoded by the bits of `mask`.
double outcome_weight(const IndicatorModel& model, unsigned mask, int n) {
  if (const auto* ind = std::get_if<IndependentIndicators>(&model)) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      w *= ((mask >> i) & 1u) ? ind->p(i) : 1.0 - ind->p(i);
    }
    return w;
  }
  const auto& j = std::get<JointPairIndicators>(model);
  switch (mask) {
    case 0b00:
      return j.p00;
    case 0b01:  // policy 1 claims only
      return j.p10;
    case 0b10:  // policy 2 claims only
      return j.p01;
    default:
      return j.p11;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Portfolio

Portfolio::Portfolio(std::vector<Margin> margins, Copula copula, IndicatorModel indicators)
    : margins_(std::move(margins)), copula_(std::move(copula)), indicators_(std::move(indicators)) {
  const int n = size();
  require(n >= 1, "portfolio needs at least one policy");
  require(copula_.dimension() == n, "copula dimension " + std::to_string(copula_.dimension()) +
                                        " does not match " + std::to_string(n) + " margins");
  if (const auto* ind = std::get_if<IndependentIndicators>(&indicators_)) {
    validate(*ind, n);
  } else {
    require(n == 2, "joint indicator pairs require exactly two policies");
    validate(std::get<JointPairIndicators>(indicators_));
  }
}

Eigen::VectorXd Portfolio::lambdas() const {
  Eigen::VectorXd l(size());
  for (int i = 0; i < size(); ++i) l(i) = margins_[static_cast<std::size_t>(i)].lambda();
  return l;
}

Eigen::VectorXd Portfolio::claim_probabilities() const {
  if (const auto* ind = std::get_if<IndependentIndicators>(&indicators_)) return ind->p;
  const auto& j = std::get<JointPairIndicators>(indicators_);
  return Eigen::Vector2d(j.p10 + j.p11, j.p01 + j.p11);
}

Portfolio Portfolio::with_margins(std::vector<Margin> margins) const {
  return Portfolio(std::move(margins), copula_, indicators_);
}

Portfolio Portfolio::with_copula(Copula copula) const {
  return Portfolio(margins_, std::move(copula), indicators_);
}

Portfolio Portfolio::with_indicators(IndicatorModel indicators) const {
  return Portfolio(margins_, copula_, std::move(indicators));
}

// ---------------------------------------------------------------------------
// Exact laws

double cdf_max(const Portfolio& pf, double x) {
  if (x < 0.0) return 0.0;
  const int n = pf.size();
  if (n > kMaxMixtureDimension) {
    throw std::invalid_argument("mixture enumeration supports at most 20 policies");
  }
  const Eigen::VectorXd f = margin_cdfs(pf, x);
  CubePoint point(n);
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const double w = outcome_weight(pf.indicators(), mask, n);
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) point(i) = ((mask >> i) & 1u) ? f(i) : 1.0;
    total += w * pf.copula().eval(point);
  }
  return total;
}

double cdf_max_pair_closed(const Portfolio& pf, double x) {
  if (pf.size() != 2 || !pf.has_independent_indicators()) {
    throw std::invalid_argument("closed bivariate form needs two policies with independent "
                                "indicators");
  }
  if (x < 0.0) return 0.0;
  const auto& p = std::get<IndependentIndicators>(pf.indicators()).p;
  const double f1 = pf.margins()[0].cdf(x);
  const double f2 = pf.margins()[1].cdf(x);
  const double s1 = pf.margins()[0].survival(x);
  const double s2 = pf.margins()[1].survival(x);
  const double c = pf.copula().eval(Eigen::Vector2d(f1, f2));
  return (1.0 - p(0) * s1) * (1.0 - p(1) * s2) + p(0) * p(1) * (c - f1 * f2);
}

double cdf_max_joint_pair(const Portfolio& pf, double x) {
  if (pf.size() != 2 || pf.has_independent_indicators()) {
    throw std::invalid_argument("joint-pair form needs two policies with joint indicators");
  }
  if (x < 0.0) return 0.0;
  const auto& j = std::get<JointPairIndicators>(pf.indicators());
  const double f1 = pf.margins()[0].cdf(x);
  const double f2 = pf.margins()[1].cdf(x);
  return j.p00 + j.p11 * pf.copula().eval(Eigen::Vector2d(f1, f2)) + j.p01 * f2 + j.p10 * f1;
}

double cdf_max_exact(const Portfolio& pf, double x) {
  if (!pf.has_independent_indicators()) return cdf_max_joint_pair(pf, x);
  if (pf.size() == 2) return cdf_max_pair_closed(pf, x);
  return cdf_max(pf, x);
}

LwsaiReport lwsai_check(const JointPairIndicators& ind) {
  return {ind.p10 <= ind.p01 + kPmfTolerance, ind.p10, ind.p01};
}

// ---------------------------------------------------------------------------
// Monte Carlo

double sample_max(const Portfolio& pf, Rng& rng) {
  const int n = pf.size();
  if (n != 2 && n != 3) throw std::invalid_argument("sampling supports 2 or 3 policies");

  unsigned claims = 0;
  if (const auto* ind = std::get_if<IndependentIndicators>(&pf.indicators())) {
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < ind->p(i)) claims |= 1u << i;
    }
  } else {
    const auto& j = std::get<JointPairIndicators>(pf.indicators());
    const double u = rng.uniform();
    if (u < j.p00) {
      claims = 0b00;
    } else if (u < j.p00 + j.p01) {
      claims = 0b10;
    } else if (u < j.p00 + j.p01 + j.p10) {
      claims = 0b01;
    } else {
      claims = 0b11;
    }
  }
  // Severities are independent of the indicators, so they only need to be
  // drawn when some policy claims.
  if (claims == 0) return 0.0;

  const CubePoint v = conditional_sample(pf.copula(), rng);
  double y = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!((claims >> i) & 1u)) continue;
    const double q = std::clamp(v(i), 0x1.0p-60, 1.0 - 0x1.0p-53);
    y = std::max(y, pf.margins()[static_cast<std::size_t>(i)].quantile(q));
  }
  return y;
}

// ---------------------------------------------------------------------------
// Verdicts

const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::kAStDominatesB:
      return "A_st_dominates_B";
    case OrderRelation::kBStDominatesA:
      return "B_st_dominates_A";
    case OrderRelation::kCrossing:
      return "crossing";
    case OrderRelation::kIndistinguishable:
      return "indistinguishable";
  }
  return "?";
}

double mixture_quantile(const Portfolio& a, const Portfolio& b, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("mixture quantile needs q in (0, 1)");
  std::vector<const Margin*> all;
  for (const auto& m : a.margins()) all.push_back(&m);
  for (const auto& m : b.margins()) all.push_back(&m);
  auto cdf = [&](double x) {
    double s = 0.0;
    for (const Margin* m : all) s += m->cdf(x);
    return s / static_cast<double>(all.size());
  };
  double lo = (*std::min_element(all.begin(), all.end(), [](auto* l, auto* r) {
                return l->support_lower() < r->support_lower();
              }))->support_lower();
  double hi = std::fmax(1.0, 2.0 * lo);
  while (cdf(hi) <= q) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("mixture quantile bracket overflow");
  }
  return bisect_increasing(cdf, q, lo, hi, 1e-12);
}

Eigen::VectorXd default_grid(const Portfolio& a, const Portfolio& b, const GridSpec& spec) {
  if (spec.points < 1) throw std::invalid_argument("grid needs at least one point");
  if (!(spec.q_low > 0.0 && spec.q_low < spec.q_high && spec.q_high < 1.0)) {
    throw std::invalid_argument("grid quantile bounds must satisfy 0 < qlo < qhi < 1");
  }
  const double lo = mixture_quantile(a, b, spec.q_low);
  const double hi = mixture_quantile(a, b, spec.q_high);
  Eigen::VectorXd grid(spec.points);
  if (spec.points == 1) {
    grid(0) = lo;
    return grid;
  }
  const double ratio = hi / lo;
  for (int k = 0; k < spec.points; ++k) {
    grid(k) = lo * std::pow(ratio, static_cast<double>(k) / (spec.points - 1));
  }
  grid(spec.points - 1) = hi;
  return grid;
}

SurvivalCurves survival_curves(const Portfolio& a, const Portfolio& b,
                               const Eigen::VectorXd& grid) {
  SurvivalCurves c{grid, Eigen::VectorXd(grid.size()), Eigen::VectorXd(grid.size())};
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    c.survival_a(k) = survival_max(a, grid(k));
    c.survival_b(k) = survival_max(b, grid(k));
  }
  return c;
}

OrderVerdict classify(const SurvivalCurves& curves) {
  OrderVerdict v;
  const Eigen::Index n = curves.x.size();
  if (n == 0) throw std::invalid_argument("verdict needs a non-empty grid");
  v.grid = std::to_string(n) + " points [" + fmt(curves.x(0)) + ", " + fmt(curves.x(n - 1)) + "]";

  const Eigen::VectorXd diff = curves.survival_b - curves.survival_a;
  v.max_gap_b_over_a = std::max(0.0, diff.maxCoeff());
  v.max_gap_a_over_b = std::max(0.0, -diff.minCoeff());

  if (v.max_gap_a_over_b <= kDominanceTolerance && v.max_gap_b_over_a <= kDominanceTolerance) {
    v.relation = OrderRelation::kIndistinguishable;
  } else if (v.max_gap_a_over_b > kCrossingTolerance && v.max_gap_b_over_a > kCrossingTolerance) {
    v.relation = OrderRelation::kCrossing;
    Eigen::Index last = -1;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::fabs(diff(k)) <= kDominanceTolerance) continue;
      if (last >= 0 && (diff(k) > 0) != (diff(last) > 0)) {
        v.crossing_location = 0.5 * (curves.x(last) + curves.x(k));
        break;
      }
      last = k;
    }
  } else if (v.max_gap_b_over_a >= v.max_gap_a_over_b) {
    v.relation = OrderRelation::kBStDominatesA;
  } else {
    v.relation = OrderRelation::kAStDominatesB;
  }
  return v;
}

OrderVerdict st_compare(const Portfolio& a, const Portfolio& b, const Eigen::VectorXd& grid) {
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    if (grid(k) < grid(k - 1)) throw std::invalid_argument("verdict grid must be sorted");
  }
  return classify(survival_curves(a, b, grid));
}

}  // namespace maxclaim
