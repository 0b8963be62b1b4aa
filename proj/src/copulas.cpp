#include "maxclaim/copulas.hpp"

#include "maxclaim/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace maxclaim {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kFdStep = 1e-6;
constexpr double kMixedFdStep = 1e-4;
constexpr double kInversionTolerance = 1e-10;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double product_except(const CubeRef& v, int skip) {
  double p = 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j != skip) p *= v(j);
  }
  return p;
}

// Odometer over the r^n points of a uniform grid. Calls f(point) with the
// coordinates k/(r-1) for k in [first, last].
template <typename F>
void for_each_grid_point(int n, int r, int first, int last, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(n), first);
  CubePoint v(n);
  const double step = 1.0 / (r - 1);
  while (true) {
    for (int i = 0; i < n; ++i) v(i) = idx[static_cast<std::size_t>(i)] * step;
    f(v);
    int d = 0;
    while (d < n && ++idx[static_cast<std::size_t>(d)] > last) {
      idx[static_cast<std::size_t>(d)] = first;
      ++d;
    }
    if (d == n) break;
  }
}

std::vector<double> to_vector(const CubePoint& v) { return {v.data(), v.data() + v.size()}; }

std::string grid_label(int n, int r) {
  return "uniform grid " + std::to_string(r) + "^" + std::to_string(n);
}

void require_resolution(int r) {
  if (r < 3) throw std::invalid_argument("grid resolution must be at least 3");
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Copula Copula::independence(int dimension) {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw std::invalid_argument("independence copula dimension must lie in [2, 20]");
  }
  return Copula(IndependenceCopula{dimension});
}

Copula Copula::fgm(int dimension, double theta) {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw std::invalid_argument("FGM copula dimension must lie in [2, 20]");
  }
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw std::invalid_argument("FGM theta must lie in [-1, 1]");
  }
  return Copula(FgmCopula{dimension, theta});
}

Copula Copula::amh(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw std::invalid_argument("Ali-Mikhail-Haq theta must lie in [-1, 1]");
  }
  return Copula(AmhCopula{theta});
}

Copula Copula::gumbel_hougaard(double theta) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("Gumbel-Hougaard theta must be >= 1");
  }
  return Copula(GumbelHougaardCopula{theta});
}

Copula Copula::frank3(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("trivariate Frank theta must be > 0");
  }
  return Copula(Frank3Copula{theta});
}

Copula Copula::custom(int dimension, std::string name,
                      std::function<double(const CubeRef&)> eval) {
  if (dimension < 2 || dimension > kMaxDimension || !eval) {
    throw std::invalid_argument("custom copula needs dimension in [2, 20] and an evaluator");
  }
  return Copula(CustomCopula{dimension, std::move(name), std::move(eval)});
}

int Copula::dimension() const {
  return std::visit(overloaded{
                        [](const IndependenceCopula& c) { return c.dimension; },
                        [](const FgmCopula& c) { return c.dimension; },
                        [](const AmhCopula&) { return 2; },
                        [](const GumbelHougaardCopula&) { return 2; },
                        [](const Frank3Copula&) { return 3; },
                        [](const CustomCopula& c) { return c.dimension; },
                    },
                    family_);
}

std::string Copula::family_name() const {
  return std::visit(overloaded{
                        [](const IndependenceCopula&) -> std::string { return "independence"; },
                        [](const FgmCopula&) -> std::string { return "fgm"; },
                        [](const AmhCopula&) -> std::string { return "amh"; },
                        [](const GumbelHougaardCopula&) -> std::string {
                          return "gumbel_hougaard";
                        },
                        [](const Frank3Copula&) -> std::string { return "frank3"; },
                        [](const CustomCopula& c) -> std::string { return c.name; },
                    },
                    family_);
}

std::string Copula::describe() const {
  return std::visit(
      overloaded{
          [](const IndependenceCopula& c) {
            return "independence(dimension=" + std::to_string(c.dimension) + ")";
          },
          [](const FgmCopula& c) {
            return "fgm(dimension=" + std::to_string(c.dimension) + ", theta=" + fmt(c.theta) +
                   ")";
          },
          [](const AmhCopula& c) { return "amh(theta=" + fmt(c.theta) + ")"; },
          [](const GumbelHougaardCopula& c) {
            return "gumbel_hougaard(theta=" + fmt(c.theta) + ")";
          },
          [](const Frank3Copula& c) { return "frank3(theta=" + fmt(c.theta) + ")"; },
          [](const CustomCopula& c) {
            return c.name + "(dimension=" + std::to_string(c.dimension) + ")";
          },
      },
      family_);
}

bool Copula::has_analytic_partials() const {
  return !std::holds_alternative<Frank3Copula>(family_) &&
         !std::holds_alternative<CustomCopula>(family_);
}

bool Copula::operator==(const Copula& other) const {
  if (family_.index() != other.family_.index()) return false;
  return std::visit(
      overloaded{
          [&](const IndependenceCopula& c) {
            return c.dimension == std::get<IndependenceCopula>(other.family_).dimension;
          },
          [&](const FgmCopula& c) {
            const auto& o = std::get<FgmCopula>(other.family_);
            return c.dimension == o.dimension && c.theta == o.theta;
          },
          [&](const AmhCopula& c) { return c.theta == std::get<AmhCopula>(other.family_).theta; },
          [&](const GumbelHougaardCopula& c) {
            return c.theta == std::get<GumbelHougaardCopula>(other.family_).theta;
          },
          [&](const Frank3Copula& c) {
            return c.theta == std::get<Frank3Copula>(other.family_).theta;
          },
          // Custom evaluators are opaque; only the same name and dimension compare equal.
          [&](const CustomCopula& c) {
            const auto& o = std::get<CustomCopula>(other.family_);
            return c.dimension == o.dimension && c.name == o.name;
          },
      },
      family_);
}

// ---------------------------------------------------------------------------
// Evaluation

double Copula::eval(const CubeRef& v) const {
  if (v.size() != dimension()) {
    throw std::invalid_argument("copula " + family_name() + ": expected a point of dimension " +
                                std::to_string(dimension()) + ", got " +
                                std::to_string(v.size()));
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= 0.0 && v(i) <= 1.0)) {
      throw std::invalid_argument("copula " + family_name() + ": coordinate " +
                                  std::to_string(i + 1) + " = " + fmt(v(i)) +
                                  " lies outside [0, 1]");
    }
  }
  return eval_unchecked(v);
}

double Copula::eval_unchecked(const CubeRef& v) const {
  return std::visit(
      overloaded{
          [&](const IndependenceCopula&) { return v.prod(); },
          [&](const FgmCopula& c) {
            return v.prod() + c.theta * (v.array() * (1.0 - v.array())).prod();
          },
          [&](const AmhCopula& c) {
            return v(0) * v(1) / (1.0 - c.theta * (1.0 - v(0)) * (1.0 - v(1)));
          },
          [&](const GumbelHougaardCopula& c) {
            if (v(0) <= 0.0 || v(1) <= 0.0) return 0.0;
            const double a =
                std::pow(-std::log(v(0)), c.theta) + std::pow(-std::log(v(1)), c.theta);
            return std::exp(-std::pow(a, 1.0 / c.theta));
          },
          [&](const Frank3Copula& c) {
            const double d = std::expm1(-c.theta);
            const double num = std::expm1(-c.theta * v(0)) * std::expm1(-c.theta * v(1)) *
                               std::expm1(-c.theta * v(2));
            return -std::log1p(num / (d * d)) / c.theta;
          },
          [&](const CustomCopula& c) { return c.eval(v); },
      },
      family_);
}

double Copula::partial_numeric(const CubeRef& v, int i, double step) const {
  if (i < 0 || i >= dimension()) {
    throw std::out_of_range("copula partial: coordinate index out of range");
  }
  CubePoint hi = v;
  CubePoint lo = v;
  const double x = v(i);
  if (x - step < 0.0) {
    hi(i) = x + step;
    return (eval(hi) - eval(v)) / step;
  }
  if (x + step > 1.0) {
    lo(i) = x - step;
    return (eval(v) - eval(lo)) / step;
  }
  hi(i) = x + step;
  lo(i) = x - step;
  return (eval(hi) - eval(lo)) / (2.0 * step);
}

double Copula::partial(const CubeRef& v, int i) const {
  if (i < 0 || i >= dimension()) {
    throw std::out_of_range("copula partial: coordinate index out of range");
  }
  if (v.size() != dimension()) {
    throw std::invalid_argument("copula partial: dimension mismatch");
  }
  return std::visit(
      overloaded{
          [&](const IndependenceCopula&) { return product_except(v, i); },
          [&](const FgmCopula& c) {
            double rest = 1.0;
            for (Eigen::Index j = 0; j < v.size(); ++j) {
              if (j != i) rest *= v(j) * (1.0 - v(j));
            }
            return product_except(v, i) + c.theta * (1.0 - 2.0 * v(i)) * rest;
          },
          [&](const AmhCopula& c) {
            const double other = v(1 - i);
            const double d = 1.0 - c.theta * (1.0 - v(0)) * (1.0 - v(1));
            return other * (1.0 - c.theta * (1.0 - other)) / (d * d);
          },
          [&](const GumbelHougaardCopula& c) {
            const double li = -std::log(v(i));
            const double a =
                std::pow(-std::log(v(0)), c.theta) + std::pow(-std::log(v(1)), c.theta);
            const double cv = std::exp(-std::pow(a, 1.0 / c.theta));
            return cv * std::pow(a, 1.0 / c.theta - 1.0) * std::pow(li, c.theta - 1.0) / v(i);
          },
          [&](const Frank3Copula&) { return partial_numeric(v, i, kFdStep); },
          [&](const CustomCopula&) { return partial_numeric(v, i, kFdStep); },
      },
      family_);
}

int default_resolution(int dimension) {
  return dimension <= 2 ? kDefaultResolution2d : kDefaultResolution3d;
}

// ---------------------------------------------------------------------------
// Checkers

ConditionReport is_pqd(const Copula& c, int grid_resolution, double tol) {
  if (c.dimension() != 2) throw std::invalid_argument("PQD check needs a bivariate copula");
  require_resolution(grid_resolution);
  ConditionReport r;
  r.name = "copula_pqd";
  r.tolerance = tol;
  r.grid = grid_label(2, grid_resolution);
  for_each_grid_point(2, grid_resolution, 0, grid_resolution - 1, [&](const CubePoint& v) {
    r.observe(v(0) * v(1) - c.eval(v), to_vector(v));
  });
  return r;
}

ConditionReport check_symmetry(const Copula& c, int grid_resolution, double tol) {
  require_resolution(grid_resolution);
  const int n = c.dimension();
  ConditionReport r;
  r.name = "copula_symmetric";
  r.tolerance = tol;
  constexpr int kSamples = 4000;
  r.grid = grid_label(n, grid_resolution) + ", " + std::to_string(kSamples) +
           " seeded samples";
  Rng rng(0x5eed5);
  CubePoint v(n);
  for (int s = 0; s < kSamples; ++s) {
    for (int i = 0; i < n; ++i) {
      v(i) = static_cast<double>(rng.next() % static_cast<std::uint64_t>(grid_resolution)) /
             (grid_resolution - 1);
    }
    const double base = c.eval(v);
    for (int i = 0; i + 1 < n; ++i) {
      CubePoint w = v;
      std::swap(w(i), w(i + 1));
      r.observe(std::fabs(base - c.eval(w)), to_vector(v));
    }
  }
  return r;
}

ConditionReport check_partial_ordering(const Copula& c, int grid_resolution) {
  require_resolution(grid_resolution);
  const int n = c.dimension();
  ConditionReport r;
  r.name = "copula_partial_ordering";
  r.tolerance = c.has_analytic_partials() ? kClosedFormTolerance : kFiniteDifferenceTolerance;
  r.grid = grid_label(n, grid_resolution) + " interior, sorted region";
  for_each_grid_point(n, grid_resolution, 1, grid_resolution - 2, [&](const CubePoint& v) {
    for (int i = 0; i + 1 < n; ++i) {
      if (v(i) > v(i + 1)) return;
    }
    r.observe(c.partial(v, 1) - c.partial(v, 0), to_vector(v));
  });
  return r;
}

ConditionReport is_schur_concave(const Copula& c, int grid_resolution) {
  const ConditionReport sym = check_symmetry(c, grid_resolution);
  const ConditionReport ord = check_partial_ordering(c, grid_resolution);
  ConditionReport r;
  r.name = "copula_schur_concave";
  r.grid = ord.grid;
  r.passed = sym.passed && ord.passed;
  const ConditionReport& worse = !sym.passed ? sym : ord;
  r.worst_violation = worse.worst_violation;
  r.tolerance = worse.tolerance;
  r.witness = worse.witness;
  return r;
}

ConditionReport plod_less(const Copula& c1, const Copula& c2, int grid_resolution, double tol) {
  if (c1.dimension() != c2.dimension()) {
    throw std::invalid_argument("PLOD comparison needs copulas of equal dimension");
  }
  require_resolution(grid_resolution);
  ConditionReport r;
  r.name = "copula_plod_less";
  r.tolerance = tol;
  r.grid = grid_label(c1.dimension(), grid_resolution);
  for_each_grid_point(c1.dimension(), grid_resolution, 0, grid_resolution - 1,
                      [&](const CubePoint& v) { r.observe(c1.eval(v) - c2.eval(v), to_vector(v)); });
  return r;
}

ConditionReport check_axioms(const Copula& c, int sample_count, std::uint64_t seed, double tol) {
  const int n = c.dimension();
  ConditionReport r;
  r.name = "copula_axioms";
  r.tolerance = tol;
  r.grid = std::to_string(sample_count) + " random points and boxes, seed " +
           std::to_string(seed);
  Rng rng(seed);
  CubePoint v(n), lo(n), hi(n), corner(n);
  for (int s = 0; s < sample_count; ++s) {
    // Grounded: a zero coordinate forces C = 0.
    for (int i = 0; i < n; ++i) v(i) = rng.uniform();
    const int z = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    v(z) = 0.0;
    r.observe(std::fabs(c.eval(v)), to_vector(v));

    // Uniform margins: C(1, ..., u, ..., 1) = u.
    v.setOnes();
    const int k = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    v(k) = rng.uniform();
    r.observe(std::fabs(c.eval(v) - v(k)), to_vector(v));

    // n-increasing: signed sum over the box corners is non-negative.
    for (int i = 0; i < n; ++i) {
      double a = rng.uniform(), b = rng.uniform();
      if (a > b) std::swap(a, b);
      lo(i) = a;
      hi(i) = b;
    }
    double volume = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      int lows = 0;
      for (int i = 0; i < n; ++i) {
        const bool upper = (mask >> i) & 1u;
        corner(i) = upper ? hi(i) : lo(i);
        lows += upper ? 0 : 1;
      }
      volume += (lows % 2 == 0 ? 1.0 : -1.0) * c.eval(corner);
    }
    std::vector<double> box = to_vector(lo);
    box.insert(box.end(), hi.data(), hi.data() + n);
    r.observe(-volume, std::move(box));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// ∂²C/∂v1∂v2 by nested differences; one-sided in a coordinate that sits
// within the step of the boundary.
double mixed_partial_12(const Copula& c, CubePoint v) {
  const double h = kMixedFdStep;
  auto offsets = [h](double x) -> std::pair<double, double> {
    if (x - h < 0.0) return {x, x + h};
    if (x + h > 1.0) return {x - h, x};
    return {x - h, x + h};
  };
  const auto [a0, a1] = offsets(v(0));
  const auto [b0, b1] = offsets(v(1));
  auto at = [&](double x, double y) {
    v(0) = x;
    v(1) = y;
    return c.eval(v);
  };
  return (at(a1, b1) - at(a1, b0) - at(a0, b1) + at(a0, b0)) / ((a1 - a0) * (b1 - b0));
}

}  // namespace

CubePoint conditional_sample(const Copula& c, Rng& rng) {
  const int n = c.dimension();
  if (n != 2 && n != 3) {
    throw std::invalid_argument("conditional sampling supports dimension 2 or 3");
  }
  CubePoint v = CubePoint::Ones(n);
  v(0) = rng.uniform();

  // v2 | v1 inverts ∂1 C(v1, ·, 1, ...), a distribution function in v2.
  const double w2 = rng.uniform();
  v(1) = bisect_increasing(
      [&](double t) {
        CubePoint p = v;
        p(1) = t;
        return c.partial(p, 0);
      },
      w2, 0.0, 1.0, kInversionTolerance);

  if (n == 3) {
    const double w3 = rng.uniform();
    const double norm = mixed_partial_12(c, v);
    if (!(norm > 0.0)) throw std::runtime_error("conditional density vanished while sampling");
    v(2) = bisect_increasing(
        [&](double t) {
          CubePoint p = v;
          p(2) = t;
          return mixed_partial_12(c, p) / norm;
        },
        w3, 0.0, 1.0, kInversionTolerance);
  }
  return v;
}

}  // namespace maxclaim
