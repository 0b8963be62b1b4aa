#include "maxclaim/theorems.hpp"

#include "maxclaim/majorize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace maxclaim {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Second divided difference f[x0, x1, x2] scaled to approximate f''.
double second_divided_difference(double x0, double f0, double x1, double f1, double x2,
                                 double f2) {
  return 2.0 * ((f2 - f1) / (x2 - x1) - (f1 - f0) / (x1 - x0)) / (x2 - x0);
}

std::vector<double> concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  std::vector<double> out(a.data(), a.data() + a.size());
  out.insert(out.end(), b.data(), b.data() + b.size());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// HFunction

HFunction HFunction::identity() { return HFunction{}; }

HFunction HFunction::sqrt() {
  HFunction h;
  h.kind_ = Kind::kSqrt;
  return h;
}

HFunction HFunction::log_shift2() {
  HFunction h;
  h.kind_ = Kind::kLogShift2;
  return h;
}

HFunction HFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("tabulated h needs at least two knots");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [p, u] = knots[i];
    if (!(p > 0.0 && p <= 1.0) || !std::isfinite(u)) {
      throw std::invalid_argument("tabulated h knots need p in (0, 1] and finite values");
    }
    if (i > 0 && !(p > knots[i - 1].first && u > knots[i - 1].second)) {
      throw std::invalid_argument("tabulated h must be strictly increasing");
    }
  }
  HFunction h;
  h.kind_ = Kind::kTabulated;
  h.knots_ = std::move(knots);
  return h;
}

std::string HFunction::name() const {
  switch (kind_) {
    case Kind::kIdentity:
      return "identity";
    case Kind::kSqrt:
      return "sqrt";
    case Kind::kLogShift2:
      return "log_shift2";
    case Kind::kTabulated:
      return "tabulated";
  }
  return "?";
}

std::pair<double, double> HFunction::domain() const {
  if (kind_ == Kind::kTabulated) return {knots_.front().first, knots_.back().first};
  return {0.0, 1.0};
}

std::pair<double, double> HFunction::range() const {
  switch (kind_) {
    case Kind::kIdentity:
    case Kind::kSqrt:
      return {0.0, 1.0};
    case Kind::kLogShift2:
      return {std::log(2.0), std::log(3.0)};
    case Kind::kTabulated:
      return {knots_.front().second, knots_.back().second};
  }
  return {0.0, 0.0};
}

double HFunction::eval(double p) const {
  const auto [lo, hi] = domain();
  const bool inside = kind_ == Kind::kTabulated ? (p >= lo && p <= hi) : (p > 0.0 && p <= 1.0);
  if (!inside) {
    throw std::domain_error("h(" + name() + "): p = " + fmt(p) + " outside its domain");
  }
  switch (kind_) {
    case Kind::kIdentity:
      return p;
    case Kind::kSqrt:
      return std::sqrt(p);
    case Kind::kLogShift2:
      return std::log(p + 2.0);
    case Kind::kTabulated: {
      auto it = std::lower_bound(knots_.begin(), knots_.end(), p,
                                 [](const auto& k, double v) { return k.first < v; });
      if (it == knots_.begin()) return it->second;
      const auto& [p1, u1] = *it;
      const auto& [p0, u0] = *(it - 1);
      return u0 + (u1 - u0) * (p - p0) / (p1 - p0);
    }
  }
  return 0.0;
}

double HFunction::inverse(double u) const {
  const auto [lo, hi] = range();
  const double slack = 1e-15 * std::fmax(1.0, std::fabs(hi));
  if (!(u >= lo - slack && u <= hi + slack)) {
    throw std::domain_error("h(" + name() + ") inverse: u = " + fmt(u) + " outside its range");
  }
  switch (kind_) {
    case Kind::kIdentity:
      return u;
    case Kind::kSqrt:
      return u * u;
    case Kind::kLogShift2:
      return std::exp(u) - 2.0;
    case Kind::kTabulated: {
      auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                                 [](const auto& k, double v) { return k.second < v; });
      if (it == knots_.begin()) return it->first;
      if (it == knots_.end()) return knots_.back().first;
      const auto& [p1, u1] = *it;
      const auto& [p0, u0] = *(it - 1);
      return p0 + (p1 - p0) * (u - u0) / (u1 - u0);
    }
  }
  return 0.0;
}

Eigen::VectorXd HFunction::apply(const Eigen::VectorXd& p) const {
  return p.unaryExpr([this](double v) { return eval(v); });
}

Eigen::VectorXd default_h_grid(const HFunction& h, int points) {
  const auto [lo, hi] = h.domain();
  Eigen::VectorXd g(points);
  for (int k = 0; k < points; ++k) {
    g(k) = h.kind() == HFunction::Kind::kTabulated
               ? lo + (hi - lo) * k / (points - 1)
               : hi * (k + 1) / points;
  }
  return g;
}

namespace {

void observe_increase(ConditionReport& r, const HFunction& h, const Eigen::VectorXd& grid) {
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    const double step = h.eval(grid(k)) - h.eval(grid(k - 1));
    if (step <= 0.0) r.observe(std::max(-step, std::numeric_limits<double>::min()), {grid(k)});
  }
}

}  // namespace

ConditionReport check_h_increasing(const HFunction& h, const Eigen::VectorXd& grid) {
  ConditionReport r;
  r.name = "h_strictly_increasing";
  r.tolerance = 0.0;
  r.grid = "p: " + std::to_string(grid.size()) + " points";
  observe_increase(r, h, grid);
  return r;
}

ConditionReport check_h_conditions(const HFunction& h, const Eigen::VectorXd& grid, double tol) {
  ConditionReport r;
  r.name = "h_increasing_concave_logconcave_inverse";
  r.tolerance = 0.0;
  r.grid = "p: " + std::to_string(grid.size()) + " points";
  observe_increase(r, h, grid);

  ConditionReport curvature;
  curvature.tolerance = tol;
  Eigen::VectorXd u = h.apply(grid);
  for (Eigen::Index k = 2; k < grid.size(); ++k) {
    // Concavity of h on the p grid.
    curvature.observe(second_divided_difference(grid(k - 2), u(k - 2), grid(k - 1), u(k - 1),
                                                grid(k), u(k)),
                      {grid(k - 1)});
    // Log-concavity of the inverse on the image grid.
    const double g0 = std::log(h.inverse(u(k - 2)));
    const double g1 = std::log(h.inverse(u(k - 1)));
    const double g2 = std::log(h.inverse(u(k)));
    curvature.observe(second_divided_difference(u(k - 2), g0, u(k - 1), g1, u(k), g2),
                      {grid(k - 1)});
  }
  if (!r.passed) return r;
  r.tolerance = tol;
  r.worst_violation = curvature.worst_violation;
  r.witness = curvature.witness;
  r.passed = curvature.passed;
  return r;
}

// ---------------------------------------------------------------------------
// Theorem ids

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3: return "T3";
    case TheoremId::T5: return "T5";
    case TheoremId::T6: return "T6";
    case TheoremId::T7: return "T7";
    case TheoremId::T8: return "T8";
    case TheoremId::T9: return "T9";
    case TheoremId::T10: return "T10";
    case TheoremId::T11: return "T11";
    case TheoremId::T12: return "T12";
    case TheoremId::T13: return "T13";
    case TheoremId::T14: return "T14";
    case TheoremId::T15: return "T15";
    case TheoremId::T16: return "T16";
    case TheoremId::T17: return "T17";
  }
  return "?";
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids = {
      TheoremId::T1,  TheoremId::T2,  TheoremId::T3,  TheoremId::T5,
      TheoremId::T6,  TheoremId::T7,  TheoremId::T8,  TheoremId::T9,
      TheoremId::T10, TheoremId::T11, TheoremId::T12, TheoremId::T13,
      TheoremId::T14, TheoremId::T15, TheoremId::T16, TheoremId::T17};
  return ids;
}

std::optional<TheoremId> parse_theorem_id(std::string_view text) {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (TheoremId id : all_theorems()) {
    if (upper == to_string(id)) return id;
  }
  return std::nullopt;
}

const ConditionReport* HypothesisReport::find(std::string_view name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Hypothesis checklists

namespace {

class Checklist {
 public:
  Checklist(TheoremId id, const Scenario& s) : s_(s) { report_.theorem = id; }

  HypothesisReport finish() {
    report_.all_passed = std::all_of(report_.conditions.begin(), report_.conditions.end(),
                                     [](const ConditionReport& c) { return c.passed; });
    return std::move(report_);
  }

  void add(ConditionReport c) { report_.conditions.push_back(std::move(c)); }

  // -- shape ---------------------------------------------------------------

  void require_pair(bool joint) {
    const char* model = joint ? "joint" : "independent";
    if (s_.a.size() != 2 || s_.b.size() != 2) {
      throw ScenarioShapeError(std::string(to_string(report_.theorem)) +
                               " compares portfolios of exactly two policies");
    }
    if (s_.a.has_independent_indicators() == joint || s_.b.has_independent_indicators() == joint) {
      throw ScenarioShapeError(std::string(to_string(report_.theorem)) + " needs " + model +
                               " claim indicators in both portfolios");
    }
  }

  void require_independent_any() {
    if (s_.a.size() != s_.b.size()) {
      throw ScenarioShapeError(std::string(to_string(report_.theorem)) +
                               " compares portfolios of equal size");
    }
    if (!s_.a.has_independent_indicators() || !s_.b.has_independent_indicators()) {
      throw ScenarioShapeError(std::string(to_string(report_.theorem)) +
                               " needs independent claim indicators in both portfolios");
    }
  }

  // -- shared ingredients ----------------------------------------------------

  void shared_margins() {
    bool same = s_.a.size() == s_.b.size();
    for (int i = 0; same && i < s_.a.size(); ++i) {
      same = s_.a.margins()[static_cast<std::size_t>(i)] ==
             s_.b.margins()[static_cast<std::size_t>(i)];
    }
    add(boolean_report("margins_shared", same, 1.0, concat(s_.a.lambdas(), s_.b.lambdas())));
  }

  void shared_probabilities() {
    const Eigen::VectorXd pa = s_.a.claim_probabilities();
    const Eigen::VectorXd pb = s_.b.claim_probabilities();
    const double gap = (pa - pb).cwiseAbs().maxCoeff();
    add(boolean_report("claim_probabilities_shared", gap == 0.0, gap, concat(pa, pb)));
  }

  void shared_indicators() {
    const auto& ja = std::get<JointPairIndicators>(s_.a.indicators());
    const auto& jb = std::get<JointPairIndicators>(s_.b.indicators());
    const double gap = std::max({std::fabs(ja.p00 - jb.p00), std::fabs(ja.p01 - jb.p01),
                                 std::fabs(ja.p10 - jb.p10), std::fabs(ja.p11 - jb.p11)});
    add(boolean_report("indicators_shared", gap == 0.0, gap,
                       {ja.p00, ja.p01, ja.p10, ja.p11, jb.p00, jb.p01, jb.p10, jb.p11}));
  }

  void shared_copula() {
    add(boolean_report("copula_shared", s_.a.copula() == s_.b.copula(), 1.0));
  }

  // -- margins ---------------------------------------------------------------

  // Records whether every margin of both portfolios belongs to one lambda
  // family and returns its prototype.
  std::optional<Margin> common_family() {
    const Margin& proto = s_.b.margins().front();
    bool same = true;
    for (const auto* pf : {&s_.a, &s_.b}) {
      for (const auto& m : pf->margins()) same = same && m.same_family(proto);
    }
    add(boolean_report("common_lambda_family", same, 1.0));
    if (!same) return std::nullopt;
    return proto;
  }

  void margin_model(const std::optional<Margin>& proto, LambdaModel model) {
    const bool ok = proto && proto->lambda_model() == model;
    add(boolean_report(std::string("margin_model_") + to_string(model), ok, 1.0));
  }

  void survival_decreasing(const std::optional<Margin>& proto) {
    if (!proto) return;
    add(check_survival_decreasing_in_lambda(lambda_family(*proto), x_grid(),
                                            lambda_grid(*proto)));
  }

  void survival_convex(const std::optional<Margin>& proto) {
    if (!proto) return;
    add(check_survival_convex_in_lambda(lambda_family(*proto), x_grid(), lambda_grid(*proto)));
  }

  void baseline_density_decreasing(const std::optional<Margin>& proto) {
    if (!proto || proto->lambda_model() != LambdaModel::kScale) return;
    const Margin base = proto->scale_baseline();
    const double lo = base.quantile(kDefaultQuantileLow);
    const double hi = base.quantile(kDefaultQuantileHigh);
    Eigen::VectorXd grid(kCheckGridPoints);
    for (int k = 0; k < kCheckGridPoints; ++k) {
      grid(k) = lo * std::pow(hi / lo, static_cast<double>(k) / (kCheckGridPoints - 1));
    }
    ConditionReport r = check_density_decreasing(base, grid);
    r.name = "baseline_density_decreasing";
    add(std::move(r));
  }

  // -- h and parameter vectors -------------------------------------------------

  void h_full() { add(check_h_conditions(s_.h, default_h_grid(s_.h))); }
  void h_increasing() { add(check_h_increasing(s_.h, default_h_grid(s_.h))); }

  Eigen::VectorXd hp(const Portfolio& pf) { return s_.h.apply(pf.claim_probabilities()); }

  void in_s(const std::string& name, const Eigen::VectorXd& lambdas, const Eigen::VectorXd& u) {
    const double v = opposite_order_violation(lambdas, u);
    add(boolean_report(name, v <= 0.0, v, concat(lambdas, u)));
  }

  void h_majorization() {
    const Eigen::VectorXd ua = hp(s_.a);
    const Eigen::VectorXd ub = hp(s_.b);
    ConditionReport r = boolean_report("h_p_majorized", true, 0.0);
    r.tolerance = s_.majorization_tolerance;
    r.observe(majorization_violation(ua, ub), concat(ua, ub));
    add(std::move(r));
  }

  void lambda_weak_supermajorization() {
    const Eigen::VectorXd la = s_.a.lambdas();
    const Eigen::VectorXd lb = s_.b.lambdas();
    ConditionReport r = boolean_report("lambda_weakly_supermajorized", true, 0.0);
    r.tolerance = s_.majorization_tolerance;
    r.observe(supermajorization_deficit(la, lb), concat(la, lb));
    add(std::move(r));
  }

  void lambda_majorization() {
    const Eigen::VectorXd la = s_.a.lambdas();
    const Eigen::VectorXd lb = s_.b.lambdas();
    ConditionReport r = boolean_report("lambda_majorized", true, 0.0);
    r.tolerance = s_.majorization_tolerance;
    r.observe(majorization_violation(la, lb), concat(la, lb));
    add(std::move(r));
  }

  void lambda_ordering(const std::string& name, const Portfolio& pf) {
    const Eigen::VectorXd l = pf.lambdas();
    add(boolean_report(name, l(0) >= l(1), l(1) - l(0), {l(0), l(1)}));
  }

  void lambda_componentwise() {
    const Eigen::VectorXd la = s_.a.lambdas();
    const Eigen::VectorXd lb = s_.b.lambdas();
    const double worst = (lb - la).maxCoeff();
    add(boolean_report("lambda_componentwise_le", worst <= 0.0, worst, concat(lb, la)));
  }

  void lwsai() {
    const LwsaiReport l = lwsai_check(std::get<JointPairIndicators>(s_.b.indicators()));
    add(boolean_report("indicators_lwsai", l.passed, l.p10 - l.p01, {l.p10, l.p01}));
  }

  // -- copulas -----------------------------------------------------------------

  int resolution() const {
    const int n = s_.b.copula().dimension();
    if (n <= 3) return default_resolution(n);
    return std::max(3, static_cast<int>(std::pow(2.0e6, 1.0 / n)));
  }

  void pqd() { add(is_pqd(s_.b.copula(), resolution())); }
  void partial_ordering() { add(check_partial_ordering(s_.b.copula(), resolution())); }
  void symmetry() { add(check_symmetry(s_.b.copula(), resolution())); }
  void plod() {
    if (s_.a.copula().dimension() != s_.b.copula().dimension()) {
      throw ScenarioShapeError("copulas of different dimension cannot be PLOD-compared");
    }
    add(plod_less(s_.b.copula(), s_.a.copula(), resolution()));
  }

  const Scenario& scenario() const { return s_; }

 private:
  static constexpr int kCheckGridPoints = 201;
  static constexpr int kLambdaGridPoints = 41;

  const Eigen::VectorXd& x_grid() {
    if (x_grid_.size() == 0) {
      x_grid_ = default_grid(s_.a, s_.b, GridSpec{kCheckGridPoints, s_.grid.q_low, s_.grid.q_high});
    }
    return x_grid_;
  }

  // Evenly spaced over the hull of every lambda in the scenario; widened to
  // three points around a single value, staying inside the family's range.
  Eigen::VectorXd lambda_grid(const Margin& proto) const {
    const Eigen::VectorXd all = (Eigen::VectorXd(s_.a.size() + s_.b.size())
                                     << s_.a.lambdas(), s_.b.lambdas()).finished();
    double lo = all.minCoeff();
    double hi = all.maxCoeff();
    int points = kLambdaGridPoints;
    if (hi - lo < 1e-9 * std::fmax(1.0, std::fabs(hi))) {
      const auto [rl, rh] = proto.lambda_range();
      const double delta = 1e-3 * std::fmax(1.0, std::fabs(lo));
      lo -= delta;
      hi += delta;
      if (lo < rl) {
        lo = rl;
        hi = rl + 2.0 * delta;
      }
      if (hi > rh) {
        hi = rh;
        lo = rh - 2.0 * delta;
      }
      points = 3;
    }
    return Eigen::VectorXd::LinSpaced(points, lo, hi);
  }

  const Scenario& s_;
  HypothesisReport report_;
  Eigen::VectorXd x_grid_;
};

// Conditions shared by the bivariate independent-indicator results that
// vary both p and lambda.
void joint_p_lambda_conditions(Checklist& c, const std::optional<Margin>& proto) {
  const Scenario& s = c.scenario();
  c.shared_copula();
  c.h_full();
  c.survival_decreasing(proto);
  c.survival_convex(proto);
  c.pqd();
  c.partial_ordering();
  c.in_s("in_S_lambda_h_p", s.b.lambdas(), c.hp(s.b));
  c.in_s("in_S_lambdastar_h_pstar", s.a.lambdas(), c.hp(s.a));
  c.h_majorization();
  c.lambda_weak_supermajorization();
}

void joint_indicator_conditions(Checklist& c, const std::optional<Margin>& proto) {
  const Scenario& s = c.scenario();
  c.shared_copula();
  c.shared_indicators();
  c.lwsai();
  c.survival_decreasing(proto);
  c.survival_convex(proto);
  c.lambda_majorization();
  c.lambda_ordering("lambda_ordering", s.b);
  c.lambda_ordering("lambdastar_ordering", s.a);
  c.symmetry();
  c.partial_ordering();
}

void dependence_conditions(Checklist& c, const std::optional<Margin>& proto) {
  c.shared_probabilities();
  c.survival_decreasing(proto);
  c.lambda_componentwise();
  c.plod();
}

LambdaModel model_of(TheoremId id) {
  switch (id) {
    case TheoremId::T5:
    case TheoremId::T9:
    case TheoremId::T15:
      return LambdaModel::kScale;
    case TheoremId::T6:
    case TheoremId::T10:
    case TheoremId::T16:
      return LambdaModel::kPhr;
    default:
      return LambdaModel::kTg;
  }
}

}  // namespace

HypothesisReport check_hypotheses(TheoremId id, const Scenario& s) {
  Checklist c(id, s);
  switch (id) {
    case TheoremId::T1: {
      c.require_pair(false);
      c.shared_margins();
      c.shared_copula();
      c.h_full();
      const auto proto = c.common_family();
      c.survival_decreasing(proto);
      c.pqd();
      c.in_s("in_S_lambda_h_p", s.b.lambdas(), c.hp(s.b));
      c.in_s("in_S_lambda_h_pstar", s.b.lambdas(), c.hp(s.a));
      c.h_majorization();
      break;
    }
    case TheoremId::T2: {
      c.require_pair(false);
      c.shared_probabilities();
      c.shared_copula();
      c.h_increasing();
      const auto proto = c.common_family();
      c.survival_decreasing(proto);
      c.survival_convex(proto);
      c.partial_ordering();
      c.in_s("in_S_lambda_h_p", s.b.lambdas(), c.hp(s.b));
      c.in_s("in_S_lambdastar_h_p", s.a.lambdas(), c.hp(s.b));
      c.lambda_weak_supermajorization();
      break;
    }
    case TheoremId::T3:
    case TheoremId::T5:
    case TheoremId::T6:
    case TheoremId::T7: {
      c.require_pair(false);
      const auto proto = c.common_family();
      if (id != TheoremId::T3) c.margin_model(proto, model_of(id));
      if (id == TheoremId::T5) c.baseline_density_decreasing(proto);
      joint_p_lambda_conditions(c, proto);
      break;
    }
    case TheoremId::T8:
    case TheoremId::T9:
    case TheoremId::T10:
    case TheoremId::T11: {
      c.require_pair(true);
      const auto proto = c.common_family();
      if (id != TheoremId::T8) c.margin_model(proto, model_of(id));
      if (id == TheoremId::T9) c.baseline_density_decreasing(proto);
      joint_indicator_conditions(c, proto);
      break;
    }
    case TheoremId::T12: {
      c.require_independent_any();
      c.shared_probabilities();
      c.shared_copula();
      const auto proto = c.common_family();
      c.survival_decreasing(proto);
      c.lambda_componentwise();
      break;
    }
    case TheoremId::T13: {
      c.require_independent_any();
      c.shared_margins();
      c.shared_probabilities();
      c.plod();
      break;
    }
    case TheoremId::T14:
    case TheoremId::T15:
    case TheoremId::T16:
    case TheoremId::T17: {
      c.require_independent_any();
      const auto proto = c.common_family();
      if (id != TheoremId::T14) c.margin_model(proto, model_of(id));
      dependence_conditions(c, proto);
      break;
    }
  }
  return c.finish();
}

TheoremVerdict verify_theorem(TheoremId id, const Scenario& s) {
  TheoremVerdict v;
  v.hypotheses = check_hypotheses(id, s);
  v.verdict = st_compare(s.a, s.b, default_grid(s.a, s.b, s.grid));
  v.conclusion_confirmed = v.verdict.relation == OrderRelation::kBStDominatesA ||
                           v.verdict.relation == OrderRelation::kIndistinguishable;
  return v;
}

}  // namespace maxclaim
