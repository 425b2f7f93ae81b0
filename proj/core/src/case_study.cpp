#include "varprod/case_study.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varprod/distributions.hpp"
#include "varprod/error.hpp"
#include "varprod/numerics.hpp"

namespace varprod {

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Two-sided normal p-value of an estimate against zero.
double wald_p_value(double estimate, double se) {
  if (!(se > 0.0)) return estimate == 0.0 ? 1.0 : 0.0;
  return std::erfc(std::fabs(estimate / se) / std::sqrt(2.0));
}

std::vector<double> ar1_residuals(const std::vector<double>& x, double phi) {
  std::vector<double> z(x.size() - 1);
  for (std::size_t t = 1; t < x.size(); ++t) z[t - 1] = x[t] - phi * x[t - 1];
  return z;
}

struct ComponentFits {
  DistributionFit gaussian;
  DistributionFit t;
  StudentTFit t_raw;
  TestResult ks_gaussian;
  TestResult ks_t;
};

ComponentFits fit_component(const std::vector<double>& z, int component) {
  ComponentFits out;
  const GaussianFit g = fit_gaussian_zero_mean(z);
  out.ks_gaussian = ks_test(z, [s = g.sigma](double x) { return numerics::normal_cdf(x / s); });
  out.gaussian = {component, "gaussian", 0.0, g.sigma, std::nullopt, g.loglik, out.ks_gaussian.p_value};

  out.t_raw = fit_t_locscale(z, true);
  const StudentTFit& t = out.t_raw;
  out.ks_t = ks_test(z, [t](double x) { return cdf_t(x / t.lambda, t.eta); });
  out.t = {component, "t-locscale", 0.0, t.lambda, t.eta, t.loglik, out.ks_t.p_value};
  return out;
}

}  // namespace

CaseStudyReport run_case_study(const MarketSeries& prices, const MarketSeries& errors,
                               const CaseStudyConfig& config) {
  if (config.hmax < 0) throw DomainError("hmax must be non-negative");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  auto [p, e] = inner_join(prices, errors);
  if (p.size() < kMinCaseStudyLength) {
    throw LengthError("case study needs at least " + std::to_string(kMinCaseStudyLength) +
                      " aligned observations, got " + std::to_string(p.size()));
  }
  if (p.size() <= static_cast<std::size_t>(config.hmax) + 1) {
    throw LengthError("series too short for hmax = " + std::to_string(config.hmax));
  }

  CaseStudyReport report;
  report.seed = config.seed;
  report.timestamps = p.timestamps;
  report.mu_x = mean_of(p.values);
  report.trajectory.x1 = p.values;
  for (double& v : report.trajectory.x1) v -= report.mu_x;
  report.trajectory.x2 = e.values;
  const Trajectory& traj = report.trajectory;

  const YuleWalkerFit yw = yule_walker_var1(traj);
  FitReport& fit = report.fit;
  fit.phi_hat = yw.phi;
  fit.phi_se = yule_walker_standard_errors(yw);
  fit.residual_cov = yw.residual_cov;

  const Trajectory full_resid = extract_residuals(yw.phi, traj);
  fit.rho_z_hat = sample_correlation(full_resid.x1, full_resid.x2);
  const TestResult corr = corr_t_test(full_resid.x1, full_resid.x2);
  const TestResult chi2 = chi2_independence(full_resid.x1, full_resid.x2, config.chi2_bins);
  fit.test_results = {corr, chi2};

  const bool off_diagonal_zero = wald_p_value(yw.phi.phi12, fit.phi_se.a12) >= config.alpha &&
                                 wald_p_value(yw.phi.phi21, fit.phi_se.a21) >= config.alpha;
  const bool residuals_independent = corr.p_value >= config.alpha && chi2.p_value >= config.alpha;
  report.case1_selected = off_diagonal_zero && residuals_independent;

  if (report.case1_selected) {
    const double phi11 = yule_walker_ar1(traj.x1);
    const double phi22 = yule_walker_ar1(traj.x2);
    report.model_phi = TransitionMatrix::diagonal(phi11, phi22);
    report.residuals.x1 = ar1_residuals(traj.x1, phi11);
    report.residuals.x2 = ar1_residuals(traj.x2, phi22);
  } else {
    report.model_phi = yw.phi;
    report.residuals = full_resid;
  }

  const ComponentFits c1 = fit_component(report.residuals.x1, 1);
  const ComponentFits c2 = fit_component(report.residuals.x2, 2);
  fit.dist_fits = {c1.gaussian, c1.t, c2.gaussian, c2.t};
  fit.test_results.insert(fit.test_results.end(), {c1.ks_gaussian, c1.ks_t, c2.ks_gaussian, c2.ks_t});

  Var1Model model;
  model.phi = report.model_phi;
  model.mean_shift = report.mu_x;
  // The Case-1 curve needs finite residual variances only (eta > 2).
  if (report.case1_selected && c1.t_raw.eta > 2.0 && c2.t_raw.eta > 2.0) {
    model.residual = ResidualSpec::independent_t(c1.t_raw.eta, c2.t_raw.eta, c1.t_raw.lambda,
                                                 c2.t_raw.lambda);
    report.residual_model = "t-indep";
  } else {
    const Matrix2 cov = report.case1_selected
                            ? Matrix2{c1.gaussian.lambda * c1.gaussian.lambda, 0.0, 0.0,
                                      c2.gaussian.lambda * c2.gaussian.lambda}
                            : fit.residual_cov;
    const double s1 = std::sqrt(cov.a11);
    const double s2 = std::sqrt(cov.a22);
    model.residual = ResidualSpec::gaussian(s1, s2, std::clamp(cov.a12 / (s1 * s2), -1.0, 1.0));
    report.residual_model = "gaussian";
  }

  report.theoretical_acvf = theoretical_acvf(model, config.hmax, AcvfMode::Auto);
  report.case_tag = report.case1_selected ? CaseTag::Case1 : classify_case(model);

  report.empirical_acvf = empirical_acvf(product_series(traj, report.mu_x), config.hmax);
  report.empirical_acvf.case_tag = report.case_tag;

  McBandConfig band_config;
  band_config.n = traj.size();
  band_config.reps = config.reps;
  band_config.hmax = config.hmax;
  band_config.burnin = config.burnin;
  band_config.threads = config.threads;
  report.band = mc_confidence_bounds(model, band_config, RandomStream(config.seed));
  report.coverage_fraction = band_coverage(report.empirical_acvf, report.band);
  return report;
}

}  // namespace varprod
