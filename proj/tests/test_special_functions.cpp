#include <doctest.h>

#include "maxclaim/special_functions.hpp"
#include "oracles.hpp"

#include <cmath>

using maxclaim::regularized_lower_incomplete_gamma;
using maxclaim::regularized_upper_incomplete_gamma;

TEST_CASE("incomplete gamma against quadrature") {
  for (double a : {0.5, 0.8, 1.0, 2.0}) {
    double worst = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double x = 0.1 * k;
      worst = std::max(worst, std::fabs(regularized_lower_incomplete_gamma(a, x) -
                                        oracle::gamma_cdf(a, x)));
    }
    CAPTURE(a);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("incomplete gamma closed forms") {
  for (double x : {0.01, 0.5, 1.0, 3.0, 20.0}) {
    CAPTURE(x);
    CHECK(regularized_lower_incomplete_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
    CHECK(regularized_upper_incomplete_gamma(2.0, x) ==
          doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-13));
    CHECK(regularized_lower_incomplete_gamma(0.5, x) ==
          doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
  }
}

TEST_CASE("incomplete gamma complement and edges") {
  for (double a : {0.3, 0.8, 2.5, 10.0, 50.0}) {
    for (double x : {1e-6, 0.2, a, a + 1.0, 3.0 * a + 5.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(regularized_lower_incomplete_gamma(a, x) + regularized_upper_incomplete_gamma(a, x) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK(regularized_lower_incomplete_gamma(2.0, 0.0) == 0.0);
  CHECK(regularized_upper_incomplete_gamma(2.0, 0.0) == 1.0);
  CHECK(regularized_upper_incomplete_gamma(0.8, 800.0) >= 0.0);
  CHECK_THROWS_AS(regularized_lower_incomplete_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_lower_incomplete_gamma(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_lower_incomplete_gamma(std::nan(""), 1.0), std::domain_error);
}
