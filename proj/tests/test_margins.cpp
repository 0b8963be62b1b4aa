#include <doctest.h>

#include "maxclaim/margins.hpp"
#include "oracles.hpp"

#include <cmath>
#include <vector>

using maxclaim::BaselineLaw;
using maxclaim::LambdaModel;
using maxclaim::Margin;

namespace {

std::vector<Margin> every_family() {
  return {Margin::gamma(0.8, 0.26),
          Margin::gamma(2.5, 1.3),
          Margin::pareto(1.0, 4.0),
          Margin::weibull(3.0, 0.7),
          Margin::transmuted_exponential(3.0, -0.2),
          Margin::transmuted_exponential(3.0, 1.0),
          Margin::scale(BaselineLaw::standard_exponential(), 2.0),
          Margin::scale(BaselineLaw::standard_uniform(), 0.5),
          Margin::phr(BaselineLaw::standard_exponential(), 1.7),
          Margin::phr(BaselineLaw::standard_uniform(), 0.4),
          Margin::tg(BaselineLaw::standard_exponential(), 0.6),
          Margin::tg(BaselineLaw::standard_uniform(), -1.0)};
}

Eigen::VectorXd linspace(int n, double lo, double hi) { return Eigen::VectorXd::LinSpaced(n, lo, hi); }

}  // namespace

TEST_CASE("survival functions match their printed forms") {
  const double x = 1.7;
  CHECK(Margin::pareto(1.0, 4.0).survival(x) == doctest::Approx(std::pow(x, -4.0)));
  CHECK(Margin::pareto(1.0, 4.0).survival(0.5) == 1.0);
  CHECK(Margin::weibull(3.0, 0.5).survival(x) == doctest::Approx(std::exp(-std::pow(0.5 * x, 3))));
  const double g = 1.0 - std::exp(-x / 3.0);
  CHECK(Margin::transmuted_exponential(3.0, 0.6).cdf(x) ==
        doctest::Approx((1.0 + 0.6) * g - 0.6 * g * g));
  CHECK(Margin::gamma(0.8, 0.4).cdf(x) == doctest::Approx(oracle::gamma_cdf(0.8, 0.4 * x)).epsilon(1e-10));
  CHECK(Margin::scale(BaselineLaw::standard_uniform(), 0.5).cdf(x) == doctest::Approx(0.85));
  CHECK(Margin::phr(BaselineLaw::standard_exponential(), 2.0).survival(x) ==
        doctest::Approx(std::exp(-2.0 * x)));
}

TEST_CASE("density integrates to the cdf") {
  for (const auto& m : every_family()) {
    CAPTURE(m.describe());
    const double lo = m.quantile(0.05);
    const double hi = m.quantile(0.9);
    const double mass = oracle::integrate([&](double t) { return m.density(t); }, lo, hi, 1e-12);
    CHECK(mass == doctest::Approx(m.cdf(hi) - m.cdf(lo)).epsilon(1e-8));
  }
}

TEST_CASE("quantile round trip") {
  for (const auto& m : every_family()) {
    CAPTURE(m.describe());
    double worst = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double q = k / 1000.0;
      worst = std::max(worst, std::fabs(m.cdf(m.quantile(q)) - q));
    }
    CHECK(worst <= 1e-8);
  }
  CHECK_THROWS_AS(Margin::pareto(1.0, 2.0).quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(Margin::pareto(1.0, 2.0).quantile(1.0), std::domain_error);
}

TEST_CASE("factories validate parameters") {
  CHECK_THROWS_AS(Margin::gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Margin::gamma(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Margin::pareto(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Margin::weibull(std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Margin::transmuted_exponential(3.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(Margin::tg(BaselineLaw::standard_uniform(), -1.01), std::invalid_argument);
  CHECK_THROWS_AS(Margin::phr(BaselineLaw::standard_uniform(), 0.0), std::invalid_argument);
}

TEST_CASE("lambda models and families") {
  CHECK(Margin::gamma(0.8, 1.0).lambda_model() == LambdaModel::kScale);
  CHECK(Margin::weibull(3.0, 1.0).lambda_model() == LambdaModel::kScale);
  CHECK(Margin::pareto(1.0, 2.0).lambda_model() == LambdaModel::kPhr);
  CHECK(Margin::transmuted_exponential(3.0, 0.2).lambda_model() == LambdaModel::kTg);
  CHECK(Margin::gamma(0.8, 0.26).with_lambda(0.74) == Margin::gamma(0.8, 0.74));
  CHECK(Margin::gamma(0.8, 0.26).same_family(Margin::gamma(0.8, 0.74)));
  CHECK_FALSE(Margin::gamma(0.8, 0.26).same_family(Margin::gamma(0.9, 0.26)));
  CHECK_FALSE(Margin::gamma(0.8, 0.26).same_family(Margin::weibull(0.8, 0.26)));
  CHECK(Margin::gamma(0.8, 0.26).scale_baseline() == Margin::gamma(0.8, 1.0));
  CHECK_THROWS_AS(Margin::pareto(1.0, 2.0).scale_baseline(), std::logic_error);
  CHECK_THROWS_AS(Margin::transmuted_exponential(3.0, 0.2).with_lambda(2.0), std::invalid_argument);
}

TEST_CASE("survival decreasing and convex in lambda") {
  const Eigen::VectorXd x = linspace(101, 0.05, 20.0);
  for (const Margin& m : {Margin::scale(BaselineLaw::standard_exponential(), 1.0),
                          Margin::pareto(1.0, 3.0), Margin::transmuted_exponential(3.0, 0.0),
                          Margin::gamma(0.8, 1.0), Margin::weibull(3.0, 1.0)}) {
    CAPTURE(m.describe());
    const auto [lo, hi] = m.lambda_range();
    const Eigen::VectorXd lambdas = linspace(41, std::max(lo, 0.05), std::min(hi, 5.0));
    CHECK(maxclaim::check_survival_decreasing_in_lambda(maxclaim::lambda_family(m), x, lambdas).passed);
  }
  const Eigen::VectorXd pareto_x = linspace(101, 1.0, 20.0);
  CHECK(maxclaim::check_survival_convex_in_lambda(
            maxclaim::lambda_family(Margin::pareto(1.0, 3.0)), pareto_x, linspace(41, 2.0, 6.0))
            .passed);
  CHECK(maxclaim::check_survival_convex_in_lambda(
            maxclaim::lambda_family(Margin::transmuted_exponential(3.0, 0.0)), x,
            linspace(41, -1.0, 1.0))
            .passed);
  // Exponential scale survival e^{-λx} is convex in λ.
  CHECK(maxclaim::check_survival_convex_in_lambda(
            maxclaim::lambda_family(Margin::scale(BaselineLaw::standard_exponential(), 1.0)), x,
            linspace(41, 0.2, 3.0))
            .passed);
}

TEST_CASE("lambda checks detect violations") {
  // Survival increasing in lambda.
  maxclaim::LambdaFamily increasing = [](double x, double l) { return std::exp(-x / l); };
  const auto dec = maxclaim::check_survival_decreasing_in_lambda(
      increasing, linspace(11, 0.1, 3.0), linspace(11, 0.5, 2.0));
  CHECK_FALSE(dec.passed);
  CHECK(dec.worst_violation > 0.0);
  CHECK(dec.witness.size() == 2);

  // Concave in lambda.
  maxclaim::LambdaFamily concave = [](double x, double l) { return std::exp(-x * l * l); };
  CHECK_FALSE(maxclaim::check_survival_convex_in_lambda(concave, linspace(11, 0.1, 1.0),
                                                        linspace(11, 0.0, 0.3))
                  .passed);
  CHECK_THROWS_AS(maxclaim::check_survival_convex_in_lambda(concave, linspace(3, 0.1, 1.0),
                                                            linspace(2, 0.0, 0.3)),
                  std::invalid_argument);
}

TEST_CASE("density decreasing") {
  const Eigen::VectorXd x = linspace(201, 0.01, 10.0);
  CHECK(maxclaim::check_density_decreasing(Margin::gamma(0.8, 1.0), x).passed);
  CHECK(maxclaim::check_density_decreasing(Margin::gamma(1.0, 1.0), x).passed);
  CHECK_FALSE(maxclaim::check_density_decreasing(Margin::gamma(2.0, 1.0), x).passed);
  CHECK_FALSE(maxclaim::check_density_decreasing(Margin::weibull(3.0, 1.0), x).passed);
}
