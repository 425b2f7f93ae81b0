#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "varprod/error.hpp"
#include "varprod/numerics.hpp"

using namespace varprod;
using namespace varprod::numerics;

TEST_SUITE("numerics") {
  TEST_CASE("log_gamma agrees with the C library") {
    for (double x : {1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.7, 10.0, 55.5, 171.0, 1e4}) {
      CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13).scale(1.0));
    }
    CHECK(std::exp(log_gamma(0.5)) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(std::exp(log_gamma(6.0)) == doctest::Approx(120.0).epsilon(1e-13));
  }

  TEST_CASE("log_gamma rejects non-positive arguments") {
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
    CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
  }

  TEST_CASE("incomplete beta closed forms") {
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
      for (double a : {0.3, 1.0, 2.5, 7.0}) {
        CHECK(regularized_incomplete_beta(a, 1.0, x) == doctest::Approx(std::pow(x, a)).epsilon(1e-12));
        CHECK(regularized_incomplete_beta(1.0, a, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, a)).epsilon(1e-12));
      }
      // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
      CHECK(regularized_incomplete_beta(2.3, 4.1, x) ==
            doctest::Approx(1.0 - regularized_incomplete_beta(4.1, 2.3, 1.0 - x)).epsilon(1e-12));
    }
    CHECK(regularized_incomplete_beta(3.0, 4.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(3.0, 4.0, 1.0) == 1.0);
  }

  TEST_CASE("incomplete beta matches quadrature of the beta density") {
    const double a = 2.5, b = 3.5;
    const double log_beta = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
    auto density = [&](double t) {
      return t <= 0.0 || t >= 1.0 ? 0.0
                                  : std::exp((a - 1) * std::log(t) + (b - 1) * std::log1p(-t) - log_beta);
    };
    for (double x : {0.1, 0.35, 0.5, 0.8, 0.95}) {
      CHECK(regularized_incomplete_beta(a, b, x) ==
            doctest::Approx(oracle::simpson(density, 0.0, x, 20000)).epsilon(1e-9));
    }
  }

  TEST_CASE("incomplete gamma: exponential and Poisson identities") {
    for (double x : {0.01, 0.5, 1.0, 3.0, 12.0, 40.0}) {
      CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
      // Q(n, x) = P(Poisson(x) < n)
      for (int n : {2, 5, 9}) {
        double term = std::exp(-x), sum = 0.0;
        for (int k = 0; k < n; ++k) {
          sum += term;
          term *= x / (k + 1);
        }
        CHECK(regularized_gamma_q(n, x) == doctest::Approx(sum).epsilon(1e-11).scale(1e-300));
      }
      CHECK(regularized_gamma_p(3.3, x) + regularized_gamma_q(3.3, x) == doctest::Approx(1.0).epsilon(1e-14));
    }
    // chi-square(1) tail at 3.841459 is 0.05
    CHECK(regularized_gamma_q(0.5, 3.841458820694124 / 2) == doctest::Approx(0.05).epsilon(1e-9));
  }

  TEST_CASE("Kolmogorov distribution") {
    CHECK(kolmogorov_cdf(0.0) == 0.0);
    CHECK(kolmogorov_cdf(-1.0) == 0.0);
    CHECK(kolmogorov_cdf(1.3580986393225505) == doctest::Approx(0.95).epsilon(1e-9));
    CHECK(kolmogorov_cdf(1.2238478702170825) == doctest::Approx(0.90).epsilon(1e-9));
    CHECK(kolmogorov_cdf(0.8) == doctest::Approx(0.4558575884258018).epsilon(1e-12));
    // Both representations agree where they hand over.
    auto series = [](double x) {
      double s = 0.0;
      for (int k = 1; k < 200; ++k) s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
      return 1.0 - 2.0 * s;
    };
    for (double x : {0.6, 0.9, 0.999, 1.001, 1.5}) CHECK(kolmogorov_cdf(x) == doctest::Approx(series(x)).epsilon(1e-10));
    double prev = 0.0;
    for (double x = 0.05; x < 4.0; x += 0.05) {
      const double k = kolmogorov_cdf(x);
      CHECK(k >= prev);
      prev = k;
    }
  }

  TEST_CASE("normal_cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  }
}
