#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "varprod/distributions.hpp"
#include "varprod/error.hpp"
#include "varprod/estimators.hpp"
#include "varprod/inference.hpp"
#include "varprod/numerics.hpp"

using namespace varprod;

TEST_SUITE("inference") {
  TEST_CASE("Yule-Walker recovers an asymmetric transition matrix") {
    const Var1Model model{{0.6, 0.25, 0.1, 0.3}, ResidualSpec::gaussian(1.0, 2.0, 0.3), 0.0};
    RandomStream rng(31);
    const Trajectory traj = simulate(model, 100000, kDefaultBurnin, rng);
    const YuleWalkerFit fit = yule_walker_var1(traj);
    CHECK(fit.phi.phi11 == doctest::Approx(0.6).epsilon(0.02 / 0.6));
    CHECK(std::fabs(fit.phi.phi12 - 0.25) < 0.02);
    CHECK(std::fabs(fit.phi.phi21 - 0.1) < 0.02);
    CHECK(std::fabs(fit.phi.phi22 - 0.3) < 0.02);
    CHECK(fit.residual_cov.a12 == fit.residual_cov.a21);
    CHECK(fit.residual_cov.a11 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(fit.residual_cov.a22 == doctest::Approx(4.0).epsilon(0.03));
    CHECK(fit.residual_cov.determinant() >= 0.0);
    const Matrix2 se = yule_walker_standard_errors(fit);
    CHECK(se.a11 > 0.0);
    CHECK(se.a11 < 0.01);
  }

  TEST_CASE("Yule-Walker on white noise") {
    RandomStream rng(2);
    Trajectory traj;
    for (int i = 0; i < 100000; ++i) {
      traj.x1.push_back(rng.standard_normal());
      traj.x2.push_back(rng.standard_normal());
    }
    const YuleWalkerFit fit = yule_walker_var1(traj);
    CHECK(fit.phi.matrix().max_abs() < 0.02);
    CHECK_THROWS_AS(yule_walker_var1(Trajectory{{1, 2, 3, 4}, {2, 4, 6, 8}}), SingularMomentError);
    CHECK_THROWS_AS(yule_walker_var1(Trajectory{{1, 2}, {2, 1}}), LengthError);
  }

  TEST_CASE("residual extraction") {
    const TransitionMatrix phi{0.5, 0.2, 0.1, 0.4};
    const Trajectory noiseless = simulate(phi, 50, 0, {3.0, -1.0}, [] { return std::pair{0.0, 0.0}; });
    const Trajectory zero = extract_residuals(phi, noiseless);
    REQUIRE(zero.size() == 49);
    for (std::size_t t = 0; t < zero.size(); ++t) {
      CHECK(zero.x1[t] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
      CHECK(zero.x2[t] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
    const Trajectory same = extract_residuals(TransitionMatrix{}, noiseless);
    CHECK(same.x1[0] == noiseless.x1[1]);

    // Recovered residuals track the injected ones.
    RandomStream rng(6);
    std::vector<double> z1, z2;
    const ResidualSpec spec = ResidualSpec::independent_t(5, 5);
    const Trajectory traj = simulate(phi, 10000, 0, {0.0, 0.0}, [&] {
      const auto z = sample_pair(spec, rng);
      z1.push_back(z.first);
      z2.push_back(z.second);
      return z;
    });
    const Trajectory rec = extract_residuals(yule_walker_var1(traj).phi, traj);
    const std::vector<double> inj1(z1.begin() + 1, z1.end());
    CHECK(sample_correlation(rec.x1, inj1) > 0.999);
  }

  TEST_CASE("Gaussian zero-mean fit") {
    std::vector<double> alt;
    for (int i = 0; i < 20; ++i) alt.push_back(i % 2 ? 1.0 : -1.0);
    const GaussianFit g = fit_gaussian_zero_mean(alt);
    CHECK(g.sigma == doctest::Approx(1.0));
    CHECK(g.loglik == doctest::Approx(-10.0 * (std::log(2 * M_PI) + 1.0)));
    CHECK_THROWS_AS(fit_gaussian_zero_mean(std::vector<double>(10, 0.0)), NumericError);
    RandomStream rng(3);
    std::vector<double> big(100000);
    for (double& v : big) v = 2.0 * rng.standard_normal();
    CHECK(std::fabs(fit_gaussian_zero_mean(big).sigma - 2.0) < 0.02);
  }

  TEST_CASE("Student's t location-scale fit") {
    RandomStream rng(12);
    std::vector<double> z(100000);
    for (double& v : z) v = 2.0 * sample_t(5.0, rng);
    const StudentTFit fit = fit_t_locscale(z, true);
    CHECK(std::fabs(fit.lambda - 2.0) < 0.05);
    CHECK(std::fabs(fit.eta - 5.0) < 0.5);
    CHECK(fit.loglik >= t_locscale_loglik(z, 0.0, 2.0, 5.0));
    CHECK_FALSE(fit.effectively_gaussian);

    std::vector<double> shifted(z.begin(), z.begin() + 5000);
    for (double& v : shifted) v += 3.0;
    const StudentTFit free_mu = fit_t_locscale(shifted, false);
    CHECK(std::fabs(free_mu.mu - 3.0) < 0.1);
    CHECK(free_mu.loglik >= t_locscale_loglik(shifted, 3.0, 2.0, 5.0));
  }

  TEST_CASE("t fit on Gaussian data hits the cap") {
    RandomStream rng(5);
    std::vector<double> z(20000);
    for (double& v : z) v = rng.standard_normal();
    const StudentTFit fit = fit_t_locscale(z, true);
    CHECK(fit.effectively_gaussian);
    CHECK(fit.eta == doctest::Approx(kStudentTEtaCap));
    CHECK(fit.lambda == doctest::Approx(1.0).epsilon(0.03));
  }

  TEST_CASE("t fit input checks") {
    CHECK_THROWS_AS(fit_t_locscale(std::vector<double>(5, 1.0), true), LengthError);
    CHECK_THROWS_AS(fit_t_locscale(std::vector<double>(20, 0.0), true), NumericError);
  }

  TEST_CASE("correlation t test") {
    const std::vector<double> a{1, -1, 1, -1};
    const std::vector<double> b{1, 1, -1, -1};
    const TestResult zero = corr_t_test(a, b);
    CHECK(zero.p_value == 1.0);
    CHECK(zero.statistic == 0.0);
    // r chosen so that t = 2.015048 with 5 dof: two-sided p = 0.1.
    const double t = 2.015048373333024, dof = 5.0;
    const double r = t / std::sqrt(dof + t * t);
    // Build x, y with exactly that sample correlation: y = r x + sqrt(1 - r^2) w, w orthogonal to x.
    const std::vector<double> x{-3, -2, -1, 0, 1, 2, 3};
    const std::vector<double> w{5, 0, -3, -4, -3, 0, 5};
    std::vector<double> y(7);
    const double sx = std::sqrt(28.0), sw = std::sqrt(84.0);
    for (int i = 0; i < 7; ++i) y[i] = r * x[i] / sx + std::sqrt(1 - r * r) * w[i] / sw;
    const TestResult res = corr_t_test(x, y);
    CHECK(res.statistic == doctest::Approx(t).epsilon(1e-10));
    CHECK(res.p_value == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(res.dof == 5.0);
    const TestResult perfect = corr_t_test(x, x);
    CHECK(perfect.p_value == 0.0);
    CHECK_THROWS_AS(corr_t_test(std::vector<double>{1, 2}, std::vector<double>{1, 2}), LengthError);
  }

  TEST_CASE("chi-square independence") {
    RandomStream rng(9);
    std::vector<double> a(10000), b(10000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const TestResult dep = chi2_independence(a, a, 4);
    CHECK(dep.p_value < 1e-10);
    CHECK(dep.dof == 9.0);
    // a = a gives a diagonal table: chi2 = n (bins - 1).
    CHECK(dep.statistic == doctest::Approx(30000.0));
    const TestResult ind = chi2_independence(a, b, 4);
    CHECK(ind.p_value > 0.001);
    CHECK_THROWS_AS(chi2_independence(std::vector<double>(79, 0.0), std::vector<double>(79, 0.0), 4), LengthError);
  }

  TEST_CASE("Kolmogorov-Smirnov test") {
    const TestResult point = ks_test(std::vector<double>(1000, 0.0), numerics::normal_cdf);
    CHECK(point.statistic == doctest::Approx(0.5));
    CHECK(point.p_value < 1e-12);

    // D against a direct scan of both one-sided gaps.
    const std::vector<double> z{-1.2, 0.3, 0.1, 2.2, -0.5, 0.9, -2.0, 1.4, 0.0, -0.1};
    std::vector<double> s = z;
    std::sort(s.begin(), s.end());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = numerics::normal_cdf(s[i]);
      d = std::max(d, std::fabs((i + 1.0) / 10.0 - f));
      d = std::max(d, std::fabs(f - i / 10.0));
    }
    const TestResult res = ks_test(z, numerics::normal_cdf);
    CHECK(res.statistic == doctest::Approx(d));
    CHECK(res.p_value == doctest::Approx(1.0 - numerics::kolmogorov_cdf(std::sqrt(10.0) * d)));
    CHECK_THROWS_AS(ks_test(std::vector<double>(5, 0.0), numerics::normal_cdf), LengthError);
  }

  TEST_CASE("test names") {
    for (TestName n : {TestName::CorrTTest, TestName::Chi2Independence, TestName::KSGoodness}) {
      CHECK(test_name_from_string(to_string(n)) == n);
    }
    CHECK_THROWS_AS(test_name_from_string("anova"), ValidationError);
  }
}
