#include <doctest.h>

#include "maxclaim/claims.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace maxclaim;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

Portfolio example1_reference() {
  return Portfolio({Margin::gamma(0.8, 0.26), Margin::gamma(0.8, 0.74)}, Copula::fgm(2, 0.5),
                   IndependentIndicators{vec({0.03, 0.02})});
}

Portfolio example5_reference() {
  return Portfolio({Margin::pareto(1.0, 7.0), Margin::pareto(1.0, 2.0)}, Copula::fgm(2, 0.7),
                   JointPairIndicators{0.89, 0.06, 0.04, 0.01});
}

}  // namespace

TEST_CASE("portfolio validation") {
  CHECK_THROWS_AS(Portfolio({Margin::pareto(1, 2)}, Copula::fgm(2, 0.1),
                            IndependentIndicators{vec({0.1})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Portfolio({Margin::pareto(1, 2), Margin::pareto(1, 3)}, Copula::fgm(2, 0.1),
                            IndependentIndicators{vec({0.1, 1.2})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Portfolio({Margin::pareto(1, 2), Margin::pareto(1, 3)}, Copula::fgm(2, 0.1),
                            IndependentIndicators{vec({0.1})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Portfolio({Margin::pareto(1, 2), Margin::pareto(1, 3)}, Copula::fgm(2, 0.1),
                            JointPairIndicators{0.5, 0.2, 0.2, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Portfolio({Margin::pareto(1, 2), Margin::pareto(1, 3), Margin::pareto(1, 4)},
                            Copula::frank3(0.6), JointPairIndicators{0.9, 0.05, 0.03, 0.02}),
                  std::invalid_argument);
  const Portfolio ok = example5_reference();
  CHECK(ok.claim_probabilities().isApprox(vec({0.05, 0.07})));
  CHECK(ok.lambdas() == vec({7.0, 2.0}));
}

TEST_CASE("mixture sum matches the bivariate closed form") {
  const Portfolio pf = example1_reference();
  for (int k = 0; k <= 200; ++k) {
    const double x = 0.05 * k;
    CHECK(std::fabs(cdf_max(pf, x) - cdf_max_pair_closed(pf, x)) <= 1e-12);
  }
  CHECK(cdf_max(pf, -1.0) == 0.0);
  CHECK(cdf_max(pf, 0.0) == doctest::Approx(0.97 * 0.98).epsilon(1e-14));
}

TEST_CASE("mixture sum against a direct oracle") {
  // Three exponential severities with an FGM copula.
  const std::vector<double> rates{0.5, 1.5, 2.0};
  const std::vector<double> p{0.1, 0.3, 0.2};
  const Portfolio pf({Margin::scale(BaselineLaw::standard_exponential(), rates[0]),
                      Margin::scale(BaselineLaw::standard_exponential(), rates[1]),
                      Margin::scale(BaselineLaw::standard_exponential(), rates[2])},
                     Copula::fgm(3, -0.6), IndependentIndicators{vec({p[0], p[1], p[2]})});
  for (double x : {0.01, 0.3, 1.0, 2.5, 7.0}) {
    auto joint = [&](unsigned mask) {
      std::vector<double> u(3, 1.0);
      for (unsigned i = 0; i < 3; ++i) {
        if (mask >> i & 1u) u[i] = 1.0 - std::exp(-rates[i] * x);
      }
      return oracle::fgm(u, -0.6);
    };
    CHECK(cdf_max(pf, x) == doctest::Approx(oracle::max_claim_cdf(p, joint)).epsilon(1e-13));
  }
}

TEST_CASE("joint indicators") {
  const Portfolio pf = example5_reference();
  for (double x : {0.5, 1.0, 1.2, 2.0, 5.0, 40.0}) {
    const double f1 = x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -7.0);
    const double f2 = x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -2.0);
    const double expected = 0.89 + 0.06 * f2 + 0.04 * f1 + 0.01 * oracle::fgm({f1, f2}, 0.7);
    CHECK(cdf_max(pf, x) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(cdf_max_joint_pair(pf, x) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(survival_max(pf, x) == doctest::Approx(1.0 - expected).epsilon(1e-12));
  }
  CHECK(lwsai_check({0.89, 0.06, 0.04, 0.01}).passed);
  CHECK_FALSE(lwsai_check({0.89, 0.04, 0.06, 0.01}).passed);
  CHECK(lwsai_check({0.9, 0.05, 0.05, 0.0}).passed);
}

TEST_CASE("sampler follows the exact law") {
  const Portfolio pf = example5_reference();
  Rng rng(7);
  std::vector<double> draws(200000);
  for (auto& d : draws) d = sample_max(pf, rng);
  std::vector<double> grid;
  for (int k = 0; k < 200; ++k) grid.push_back(1.0 + 0.05 * k);
  const double gap = oracle::ecdf_sup_gap(draws, grid, [&](double x) { return cdf_max(pf, x); });
  CHECK(gap < 0.005);
}

TEST_CASE("default grid") {
  const Portfolio a = example1_reference();
  const Eigen::VectorXd g = default_grid(a, a);
  CHECK(g.size() == kDefaultGridPoints);
  CHECK(g(0) > 0.0);
  for (Eigen::Index k = 1; k < g.size(); ++k) CHECK(g(k) > g(k - 1));
  const double mix = 0.5 * (Margin::gamma(0.8, 0.26).cdf(g(g.size() - 1)) +
                            Margin::gamma(0.8, 0.74).cdf(g(g.size() - 1)));
  CHECK(mix == doctest::Approx(kDefaultQuantileHigh).epsilon(1e-9));
  CHECK(default_grid(a, a, GridSpec{1, 1e-4, 0.9999}).size() == 1);
  CHECK_THROWS_AS(default_grid(a, a, GridSpec{0, 1e-4, 0.9999}), std::invalid_argument);
  CHECK_THROWS_AS(default_grid(a, a, GridSpec{10, 0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("verdict classification") {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  auto curves = [&](Eigen::VectorXd sa, Eigen::VectorXd sb) { return SurvivalCurves{x, sa, sb}; };
  const Eigen::VectorXd base = vec({0.9, 0.7, 0.5, 0.3, 0.1});

  CHECK(classify(curves(base, base)).relation == OrderRelation::kIndistinguishable);
  CHECK(classify(curves(base.array() - 0.01, base)).relation == OrderRelation::kBStDominatesA);
  CHECK(classify(curves(base.array() + 0.01, base)).relation == OrderRelation::kAStDominatesB);

  const OrderVerdict cross = classify(curves(base, base + vec({0.02, 0.01, 0.0, -0.01, -0.02})));
  CHECK(cross.relation == OrderRelation::kCrossing);
  CHECK(cross.crossing_location == doctest::Approx(3.0));
  CHECK(cross.max_gap_b_over_a == doctest::Approx(0.02));
  CHECK(cross.max_gap_a_over_b == doctest::Approx(0.02));

  // A gap below the crossing tolerance on one side is noise, not a crossing.
  const OrderVerdict dom = classify(curves(base, base + vec({0.02, 0.01, 0.0, -5e-11, 0.0})));
  CHECK(dom.relation == OrderRelation::kBStDominatesA);

  CHECK_THROWS_AS(st_compare(example1_reference(), example1_reference(), vec({2.0, 1.0})),
                  std::invalid_argument);
  CHECK(std::string(to_string(OrderRelation::kBStDominatesA)) == "B_st_dominates_A");
}
