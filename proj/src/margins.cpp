#include "maxclaim/margins.hpp"

#include "maxclaim/bisect.hpp"
#include "maxclaim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace maxclaim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuantileWidth = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Generic inverse of a continuous non-decreasing cdf with support [lo, ∞):
// double the upper bracket until it covers q, then bisect.
template <typename Cdf>
double invert_cdf(Cdf&& cdf, double q, double lo) {
  double hi = std::fmax(1.0, 2.0 * std::fabs(lo));
  while (cdf(hi) <= q) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericFault("quantile bracket overflow");
  }
  return bisect_increasing(cdf, q, lo, hi, kQuantileWidth);
}

// Solves F(1 + λ - λF) = q for F in [0, 1] (the transmuted cdf), in the
// rationalised form that stays accurate for small |λ|.
double transmuted_baseline_probability(double q, double lambda) {
  const double b = 1.0 + lambda;
  return 2.0 * q / (b + std::sqrt(std::fmax(0.0, b * b - 4.0 * lambda * q)));
}

double clamp01(double v) { return std::fmin(1.0, std::fmax(0.0, v)); }

}  // namespace

// ---------------------------------------------------------------------------
// BaselineLaw

BaselineLaw BaselineLaw::standard_exponential() {
  BaselineLaw b;
  b.kind_ = Kind::kExponential;
  b.name_ = "exponential";
  b.upper_ = kInf;
  return b;
}

BaselineLaw BaselineLaw::standard_uniform() {
  BaselineLaw b;
  b.kind_ = Kind::kUniform;
  b.name_ = "uniform";
  b.upper_ = 1.0;
  return b;
}

BaselineLaw BaselineLaw::custom(std::string name, std::function<double(double)> cdf,
                                std::function<double(double)> density,
                                double support_upper) {
  require(static_cast<bool>(cdf) && static_cast<bool>(density),
          "custom baseline needs cdf and density");
  require(support_upper > 0.0, "custom baseline support must extend past 0");
  BaselineLaw b;
  b.kind_ = Kind::kCustom;
  b.name_ = std::move(name);
  b.cdf_ = std::move(cdf);
  b.density_ = std::move(density);
  b.upper_ = support_upper;
  return b;
}

double BaselineLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::kExponential:
      return -std::expm1(-x);
    case Kind::kUniform:
      return std::fmin(x, 1.0);
    case Kind::kCustom:
      return x >= upper_ ? 1.0 : clamp01(cdf_(x));
  }
  return 0.0;
}

double BaselineLaw::survival(double x) const {
  if (kind_ == Kind::kExponential) return x <= 0.0 ? 1.0 : std::exp(-x);
  return 1.0 - cdf(x);
}

double BaselineLaw::density(double x) const {
  if (x < 0.0 || x > upper_) return 0.0;
  switch (kind_) {
    case Kind::kExponential:
      return std::exp(-x);
    case Kind::kUniform:
      return 1.0;
    case Kind::kCustom:
      return density_(x);
  }
  return 0.0;
}

double BaselineLaw::quantile(double q) const {
  switch (kind_) {
    case Kind::kExponential:
      return -std::log1p(-q);
    case Kind::kUniform:
      return q;
    case Kind::kCustom:
      if (std::isfinite(upper_)) {
        return bisect_increasing([this](double x) { return cdf(x); }, q, 0.0, upper_,
                                 kQuantileWidth);
      }
      return invert_cdf([this](double x) { return cdf(x); }, q, 0.0);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Margin factories

const char* to_string(LambdaModel m) {
  switch (m) {
    case LambdaModel::kScale:
      return "scale";
    case LambdaModel::kPhr:
      return "phr";
    case LambdaModel::kTg:
      return "tg";
  }
  return "?";
}

Margin Margin::gamma(double shape, double rate) {
  require(positive_finite(shape), "gamma shape must be > 0");
  require(positive_finite(rate), "gamma rate must be > 0");
  return Margin(GammaLaw{shape, rate});
}

Margin Margin::pareto(double scale, double exponent) {
  require(positive_finite(scale), "pareto scale must be > 0");
  require(positive_finite(exponent), "pareto exponent must be > 0");
  return Margin(ParetoLaw{scale, exponent});
}

Margin Margin::weibull(double shape, double rate) {
  require(positive_finite(shape), "weibull shape must be > 0");
  require(positive_finite(rate), "weibull rate must be > 0");
  return Margin(WeibullLaw{shape, rate});
}

Margin Margin::transmuted_exponential(double mean, double transmute) {
  require(positive_finite(mean), "transmuted exponential mean must be > 0");
  require(transmute >= -1.0 && transmute <= 1.0,
          "transmuted exponential transmute parameter must lie in [-1, 1]");
  return Margin(TransmutedExponentialLaw{mean, transmute});
}

Margin Margin::scale(BaselineLaw baseline, double rate) {
  require(positive_finite(rate), "scale-model rate must be > 0");
  return Margin(ScaleLaw{std::move(baseline), rate});
}

Margin Margin::phr(BaselineLaw baseline, double power) {
  require(positive_finite(power), "PHR power must be > 0");
  return Margin(PhrLaw{std::move(baseline), power});
}

Margin Margin::tg(BaselineLaw baseline, double transmute) {
  require(transmute >= -1.0 && transmute <= 1.0,
          "TG transmute parameter must lie in [-1, 1]");
  return Margin(TgLaw{std::move(baseline), transmute});
}

// ---------------------------------------------------------------------------
// Evaluation

double Margin::survival(double x) const {
  return std::visit(
      overloaded{
          [x](const GammaLaw& g) {
            return x <= 0.0 ? 1.0 : regularized_upper_incomplete_gamma(g.shape, g.rate * x);
          },
          [x](const ParetoLaw& p) {
            return x <= p.scale ? 1.0 : std::pow(p.scale / x, p.exponent);
          },
          [x](const WeibullLaw& w) {
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(w.rate * x, w.shape));
          },
          [x](const TransmutedExponentialLaw& t) {
            if (x <= 0.0) return 1.0;
            const double s = std::exp(-x / t.mean);
            return s * (1.0 - t.transmute * (1.0 - s));
          },
          [x](const ScaleLaw& s) { return s.baseline.survival(s.rate * x); },
          [x](const PhrLaw& p) {
            const double s = p.baseline.survival(x);
            return s <= 0.0 ? 0.0 : std::pow(s, p.power);
          },
          [x](const TgLaw& t) {
            return t.baseline.survival(x) * (1.0 - t.transmute * t.baseline.cdf(x));
          },
      },
      law_);
}

double Margin::cdf(double x) const {
  return std::visit(
      overloaded{
          [x](const GammaLaw& g) {
            return x <= 0.0 ? 0.0 : regularized_lower_incomplete_gamma(g.shape, g.rate * x);
          },
          [x](const ParetoLaw& p) {
            return x <= p.scale ? 0.0 : -std::expm1(p.exponent * std::log(p.scale / x));
          },
          [x](const WeibullLaw& w) {
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(w.rate * x, w.shape));
          },
          [x](const TransmutedExponentialLaw& t) {
            if (x <= 0.0) return 0.0;
            const double f = -std::expm1(-x / t.mean);
            return f * (1.0 + t.transmute - t.transmute * f);
          },
          [x](const ScaleLaw& s) { return s.baseline.cdf(s.rate * x); },
          [x](const PhrLaw& p) {
            const double s = p.baseline.survival(x);
            if (s <= 0.0) return 1.0;
            return -std::expm1(p.power * std::log(s));
          },
          [x](const TgLaw& t) {
            const double f = t.baseline.cdf(x);
            return f * (1.0 + t.transmute - t.transmute * f);
          },
      },
      law_);
}

double Margin::density(double x) const {
  return std::visit(
      overloaded{
          [x](const GammaLaw& g) {
            if (x <= 0.0) return g.shape < 1.0 ? kInf : (g.shape == 1.0 ? g.rate : 0.0);
            return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) -
                            g.rate * x - std::lgamma(g.shape));
          },
          [x](const ParetoLaw& p) {
            return x < p.scale ? 0.0 : p.exponent * std::pow(p.scale, p.exponent) *
                                           std::pow(x, -p.exponent - 1.0);
          },
          [x](const WeibullLaw& w) {
            if (x < 0.0) return 0.0;
            const double z = std::pow(w.rate * x, w.shape);
            if (x == 0.0) return w.shape < 1.0 ? kInf : (w.shape == 1.0 ? w.rate : 0.0);
            return w.shape * z / x * std::exp(-z);
          },
          [x](const TransmutedExponentialLaw& t) {
            if (x < 0.0) return 0.0;
            const double s = std::exp(-x / t.mean);
            return s / t.mean * (1.0 - t.transmute + 2.0 * t.transmute * s);
          },
          [x](const ScaleLaw& s) { return s.rate * s.baseline.density(s.rate * x); },
          [x](const PhrLaw& p) {
            const double s = p.baseline.survival(x);
            if (s <= 0.0) return 0.0;
            return p.power * std::pow(s, p.power - 1.0) * p.baseline.density(x);
          },
          [x](const TgLaw& t) {
            const double f = t.baseline.cdf(x);
            return t.baseline.density(x) * (1.0 + t.transmute - 2.0 * t.transmute * f);
          },
      },
      law_);
}

double Margin::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("quantile: probability must lie in (0, 1), got " + fmt(q));
  }
  return std::visit(
      overloaded{
          [this, q](const GammaLaw&) {
            return invert_cdf([this](double x) { return cdf(x); }, q, 0.0);
          },
          [q](const ParetoLaw& p) { return p.scale * std::pow(1.0 - q, -1.0 / p.exponent); },
          [q](const WeibullLaw& w) {
            return std::pow(-std::log1p(-q), 1.0 / w.shape) / w.rate;
          },
          [q](const TransmutedExponentialLaw& t) {
            const double f = transmuted_baseline_probability(q, t.transmute);
            return -t.mean * std::log1p(-f);
          },
          [q](const ScaleLaw& s) { return s.baseline.quantile(q) / s.rate; },
          [q](const PhrLaw& p) {
            return p.baseline.quantile(-std::expm1(std::log1p(-q) / p.power));
          },
          [q](const TgLaw& t) {
            return t.baseline.quantile(transmuted_baseline_probability(q, t.transmute));
          },
      },
      law_);
}

double Margin::support_lower() const {
  if (const auto* p = std::get_if<ParetoLaw>(&law_)) return p->scale;
  return 0.0;
}

// ---------------------------------------------------------------------------
// Lambda view

double Margin::lambda() const {
  return std::visit(overloaded{
                        [](const GammaLaw& g) { return g.rate; },
                        [](const ParetoLaw& p) { return p.exponent; },
                        [](const WeibullLaw& w) { return w.rate; },
                        [](const TransmutedExponentialLaw& t) { return t.transmute; },
                        [](const ScaleLaw& s) { return s.rate; },
                        [](const PhrLaw& p) { return p.power; },
                        [](const TgLaw& t) { return t.transmute; },
                    },
                    law_);
}

Margin Margin::with_lambda(double lambda) const {
  return std::visit(
      overloaded{
          [lambda](const GammaLaw& g) { return gamma(g.shape, lambda); },
          [lambda](const ParetoLaw& p) { return pareto(p.scale, lambda); },
          [lambda](const WeibullLaw& w) { return weibull(w.shape, lambda); },
          [lambda](const TransmutedExponentialLaw& t) {
            return transmuted_exponential(t.mean, lambda);
          },
          [lambda](const ScaleLaw& s) { return scale(s.baseline, lambda); },
          [lambda](const PhrLaw& p) { return phr(p.baseline, lambda); },
          [lambda](const TgLaw& t) { return tg(t.baseline, lambda); },
      },
      law_);
}

std::pair<double, double> Margin::lambda_range() const {
  switch (lambda_model()) {
    case LambdaModel::kTg:
      return {-1.0, 1.0};
    default:
      return {std::numeric_limits<double>::min(), std::numeric_limits<double>::max()};
  }
}

LambdaModel Margin::lambda_model() const {
  return std::visit(overloaded{
                        [](const GammaLaw&) { return LambdaModel::kScale; },
                        [](const ParetoLaw&) { return LambdaModel::kPhr; },
                        [](const WeibullLaw&) { return LambdaModel::kScale; },
                        [](const TransmutedExponentialLaw&) { return LambdaModel::kTg; },
                        [](const ScaleLaw&) { return LambdaModel::kScale; },
                        [](const PhrLaw&) { return LambdaModel::kPhr; },
                        [](const TgLaw&) { return LambdaModel::kTg; },
                    },
                    law_);
}

bool Margin::same_family(const Margin& other) const {
  if (law_.index() != other.law_.index()) return false;
  const auto same_baseline = [](const BaselineLaw& a, const BaselineLaw& b) {
    return a.kind() == b.kind() && a.name() == b.name();
  };
  return std::visit(
      overloaded{
          [&](const GammaLaw& g) { return g.shape == std::get<GammaLaw>(other.law_).shape; },
          [&](const ParetoLaw& p) { return p.scale == std::get<ParetoLaw>(other.law_).scale; },
          [&](const WeibullLaw& w) {
            return w.shape == std::get<WeibullLaw>(other.law_).shape;
          },
          [&](const TransmutedExponentialLaw& t) {
            return t.mean == std::get<TransmutedExponentialLaw>(other.law_).mean;
          },
          [&](const ScaleLaw& s) {
            return same_baseline(s.baseline, std::get<ScaleLaw>(other.law_).baseline);
          },
          [&](const PhrLaw& p) {
            return same_baseline(p.baseline, std::get<PhrLaw>(other.law_).baseline);
          },
          [&](const TgLaw& t) {
            return same_baseline(t.baseline, std::get<TgLaw>(other.law_).baseline);
          },
      },
      law_);
}

Margin Margin::scale_baseline() const {
  if (lambda_model() != LambdaModel::kScale) {
    throw std::logic_error(family_name() + " is not a scale-model family");
  }
  return with_lambda(1.0);
}

bool Margin::operator==(const Margin& other) const {
  return same_family(other) && lambda() == other.lambda();
}

std::string Margin::family_name() const {
  return std::visit(overloaded{
                        [](const GammaLaw&) -> std::string { return "gamma"; },
                        [](const ParetoLaw&) -> std::string { return "pareto"; },
                        [](const WeibullLaw&) -> std::string { return "weibull"; },
                        [](const TransmutedExponentialLaw&) -> std::string {
                          return "transmuted_exponential";
                        },
                        [](const ScaleLaw&) -> std::string { return "scale"; },
                        [](const PhrLaw&) -> std::string { return "phr"; },
                        [](const TgLaw&) -> std::string { return "tg"; },
                    },
                    law_);
}

std::string Margin::describe() const {
  return std::visit(
      overloaded{
          [](const GammaLaw& g) {
            return "gamma(shape=" + fmt(g.shape) + ", rate=" + fmt(g.rate) + ")";
          },
          [](const ParetoLaw& p) {
            return "pareto(scale=" + fmt(p.scale) + ", exponent=" + fmt(p.exponent) + ")";
          },
          [](const WeibullLaw& w) {
            return "weibull(shape=" + fmt(w.shape) + ", rate=" + fmt(w.rate) + ")";
          },
          [](const TransmutedExponentialLaw& t) {
            return "transmuted_exponential(mean=" + fmt(t.mean) +
                   ", transmute=" + fmt(t.transmute) + ")";
          },
          [](const ScaleLaw& s) {
            return "scale(baseline=" + s.baseline.name() + ", rate=" + fmt(s.rate) + ")";
          },
          [](const PhrLaw& p) {
            return "phr(baseline=" + p.baseline.name() + ", power=" + fmt(p.power) + ")";
          },
          [](const TgLaw& t) {
            return "tg(baseline=" + t.baseline.name() + ", transmute=" + fmt(t.transmute) +
                   ")";
          },
      },
      law_);
}

LambdaFamily lambda_family(const Margin& prototype) {
  return [prototype](double x, double lambda) {
    return prototype.with_lambda(lambda).survival(x);
  };
}

// ---------------------------------------------------------------------------
// Lambda-condition checkers

namespace {

std::string grid_label(const char* name, const Eigen::VectorXd& g) {
  if (g.size() == 0) return std::string(name) + ": empty";
  return std::string(name) + ": " + std::to_string(g.size()) + " points [" + fmt(g(0)) +
         ", " + fmt(g(g.size() - 1)) + "]";
}

}  // namespace

ConditionReport check_survival_decreasing_in_lambda(const LambdaFamily& family,
                                                    const Eigen::VectorXd& x_grid,
                                                    const Eigen::VectorXd& lambda_grid,
                                                    double tol) {
  ConditionReport r;
  r.name = "survival_decreasing_in_lambda";
  r.tolerance = tol;
  r.grid = grid_label("x", x_grid) + "; " + grid_label("lambda", lambda_grid);
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid(i);
    double prev = family(x, lambda_grid(0));
    for (Eigen::Index k = 1; k < lambda_grid.size(); ++k) {
      const double cur = family(x, lambda_grid(k));
      r.observe(cur - prev, {x, lambda_grid(k)});
      prev = cur;
    }
  }
  return r;
}

ConditionReport check_survival_convex_in_lambda(const LambdaFamily& family,
                                                const Eigen::VectorXd& x_grid,
                                                const Eigen::VectorXd& lambda_grid,
                                                double tol) {
  if (lambda_grid.size() < 3) {
    throw std::invalid_argument("convexity check needs at least 3 lambda points");
  }
  const double step = lambda_grid(1) - lambda_grid(0);
  for (Eigen::Index k = 2; k < lambda_grid.size(); ++k) {
    const double d = lambda_grid(k) - lambda_grid(k - 1);
    if (std::fabs(d - step) > 1e-9 * std::fmax(1.0, std::fabs(step))) {
      throw std::invalid_argument("convexity check needs an evenly spaced lambda grid");
    }
  }
  ConditionReport r;
  r.name = "survival_convex_in_lambda";
  r.tolerance = tol;
  r.grid = grid_label("x", x_grid) + "; " + grid_label("lambda", lambda_grid);
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid(i);
    double left = family(x, lambda_grid(0));
    double mid = family(x, lambda_grid(1));
    for (Eigen::Index k = 2; k < lambda_grid.size(); ++k) {
      const double right = family(x, lambda_grid(k));
      r.observe(-(left - 2.0 * mid + right), {x, lambda_grid(k - 1)});
      left = mid;
      mid = right;
    }
  }
  return r;
}

ConditionReport check_density_decreasing(const Margin& m, const Eigen::VectorXd& x_grid,
                                         double tol) {
  ConditionReport r;
  r.name = "density_decreasing";
  r.tolerance = tol;
  r.grid = grid_label("x", x_grid);
  if (x_grid.size() == 0) return r;
  double prev = m.density(x_grid(0));
  for (Eigen::Index i = 1; i < x_grid.size(); ++i) {
    const double cur = m.density(x_grid(i));
    r.observe(cur - prev, {x_grid(i)});
    prev = cur;
  }
  return r;
}

}  // namespace maxclaim
