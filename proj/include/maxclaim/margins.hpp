#pragma once

// Parametric severity laws. Every family carries one distinguished parameter
// lambda (rate, exponent, power, or transmute parameter) that the ordering
// results vary; the remaining parameters are fixed per family.

#include "maxclaim/condition_report.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <variant>

namespace maxclaim {

/// A fixed, parameter-free non-negative law used under the scale, PHR and TG
/// wrappers.
class BaselineLaw {
 public:
  enum class Kind { kExponential, kUniform, kCustom };

  static BaselineLaw standard_exponential();
  static BaselineLaw standard_uniform();
  /// `support_upper` may be +inf. The cdf must be non-decreasing on
  /// [0, support_upper] with cdf(0) = 0.
  static BaselineLaw custom(std::string name, std::function<double(double)> cdf,
                            std::function<double(double)> density,
                            double support_upper);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double cdf(double x) const;
  double survival(double x) const;
  double density(double x) const;
  double quantile(double q) const;
  double support_upper() const { return upper_; }

 private:
  Kind kind_ = Kind::kExponential;
  std::string name_;
  std::function<double(double)> cdf_;
  std::function<double(double)> density_;
  double upper_ = 0.0;
};

struct GammaLaw {
  double shape;
  double rate;
};
struct ParetoLaw {
  double scale;
  double exponent;
};
struct WeibullLaw {
  double shape;
  double rate;
};
struct TransmutedExponentialLaw {
  double mean;
  double transmute;
};
struct ScaleLaw {
  BaselineLaw baseline;
  double rate;
};
struct PhrLaw {
  BaselineLaw baseline;
  double power;
};
struct TgLaw {
  BaselineLaw baseline;
  double transmute;
};

/// How lambda enters the survival function.
enum class LambdaModel {
  kScale,  // F̄(λx)
  kPhr,    // F̄(x)^λ
  kTg,     // F̄(x)(1 - λF(x))
};

const char* to_string(LambdaModel m);

/// An immutable severity law. Construct through the named factories, which
/// validate parameter ranges and throw std::invalid_argument.
class Margin {
 public:
  using Law = std::variant<GammaLaw, ParetoLaw, WeibullLaw, TransmutedExponentialLaw,
                           ScaleLaw, PhrLaw, TgLaw>;

  static Margin gamma(double shape, double rate);
  static Margin pareto(double scale, double exponent);
  static Margin weibull(double shape, double rate);
  static Margin transmuted_exponential(double mean, double transmute);
  static Margin scale(BaselineLaw baseline, double rate);
  static Margin phr(BaselineLaw baseline, double power);
  static Margin tg(BaselineLaw baseline, double transmute);

  const Law& law() const { return law_; }
  std::string family_name() const;
  std::string describe() const;

  double survival(double x) const;
  double cdf(double x) const;
  double density(double x) const;
  /// Inverse of the cdf for q in (0, 1); throws std::domain_error otherwise.
  double quantile(double q) const;
  /// Smallest point of the support (0, or the Pareto scale).
  double support_lower() const;

  double lambda() const;
  /// The same family with lambda replaced; validates the new value.
  Margin with_lambda(double lambda) const;
  /// Valid closed range for lambda in this family (open ends reported as the
  /// nearest representable value).
  std::pair<double, double> lambda_range() const;
  LambdaModel lambda_model() const;
  /// Same family with identical non-lambda parameters.
  bool same_family(const Margin& other) const;
  /// For scale-model families, the law at lambda = 1, whose density condition
  /// governs the scale results. Throws std::logic_error otherwise.
  Margin scale_baseline() const;

  bool operator==(const Margin& other) const;

 private:
  explicit Margin(Law law) : law_(std::move(law)) {}
  Law law_;
};

/// F̄(x; λ) for a family with λ free.
using LambdaFamily = std::function<double(double x, double lambda)>;

LambdaFamily lambda_family(const Margin& prototype);

inline constexpr double kLambdaCheckTolerance = 1e-9;

/// F̄(x; λ) non-increasing along the (ascending) lambda grid at every x.
ConditionReport check_survival_decreasing_in_lambda(const LambdaFamily& family,
                                                    const Eigen::VectorXd& x_grid,
                                                    const Eigen::VectorXd& lambda_grid,
                                                    double tol = kLambdaCheckTolerance);

/// Second differences of F̄(x; ·) along an evenly spaced lambda grid are
/// non-negative.
ConditionReport check_survival_convex_in_lambda(const LambdaFamily& family,
                                                const Eigen::VectorXd& x_grid,
                                                const Eigen::VectorXd& lambda_grid,
                                                double tol = kLambdaCheckTolerance);

/// Density non-increasing along a sorted x grid.
ConditionReport check_density_decreasing(const Margin& m, const Eigen::VectorXd& x_grid,
                                         double tol = kLambdaCheckTolerance);

}  // namespace maxclaim
