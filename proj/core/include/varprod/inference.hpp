#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varprod/error.hpp"
#include "varprod/matrix2.hpp"
#include "varprod/var1.hpp"

namespace varprod {

struct YuleWalkerFit {
  TransitionMatrix phi;
  Matrix2 residual_cov;
  Matrix2 gamma0;  // sample lag-0 covariance
  Matrix2 gamma1;  // sample E[X(t+1) X(t)^T]
  std::size_t n = 0;
};

/// Phi_hat = Gamma_hat(1) Gamma_hat(0)^{-1} with Gamma(h) = E[X(t+h) X(t)^T]
/// estimated by mean-subtracted, 1/n-normalised sample covariances.
YuleWalkerFit yule_walker_var1(const Trajectory& traj);

/// Asymptotic standard errors of Phi_hat entries: sqrt(Sigma_Z[a][a] * Gamma(0)^{-1}[b][b] / n).
Matrix2 yule_walker_standard_errors(const YuleWalkerFit& fit);

/// Z_hat(t) = X(t) - Phi X(t-1) for t = 2..n (length n - 1).
Trajectory extract_residuals(const TransitionMatrix& phi, const Trajectory& traj);

/// Lag-1 autocorrelation of one series (scalar Yule-Walker for an AR(1)).
double yule_walker_ar1(std::span<const double> series);

struct GaussianFit {
  double sigma = 0.0;
  double loglik = 0.0;
};

/// Zero-mean Gaussian MLE: sigma^2 = mean(z^2).
GaussianFit fit_gaussian_zero_mean(std::span<const double> series);

struct StudentTFit {
  double mu = 0.0;
  double lambda = 1.0;
  double eta = 1.0;
  double loglik = 0.0;
  bool mu_fixed = false;
  /// eta reached the cap; the data are indistinguishable from Gaussian.
  bool effectively_gaussian = false;
  int iterations = 0;
};

inline constexpr double kStudentTEtaCap = 200.0;

/// Thrown when the simplex search hits its iteration cap; carries the best point found.
class StudentTFitError : public ConvergenceError {
 public:
  StudentTFitError(const std::string& what, StudentTFit best)
      : ConvergenceError(what), best_(best) {}
  const StudentTFit& best() const noexcept { return best_; }

 private:
  StudentTFit best_;
};

double t_locscale_loglik(std::span<const double> series, double mu, double lambda, double eta);

/// Maximum likelihood for mu + lambda * T_eta by Nelder-Mead over
/// (mu, ln lambda, ln eta), or (ln lambda, ln eta) with mu fixed at 0.
StudentTFit fit_t_locscale(std::span<const double> series, bool fix_mu_at_zero);

enum class TestName { CorrTTest, Chi2Independence, KSGoodness };

const char* to_string(TestName name) noexcept;
TestName test_name_from_string(const std::string& name);

struct TestResult {
  TestName name = TestName::CorrTTest;
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;  // 0 when not applicable
  std::size_t n = 0;
};

/// t = r sqrt(n-2) / sqrt(1-r^2), two-sided p-value from t_{n-2}.
TestResult corr_t_test(std::span<const double> a, std::span<const double> b);

inline constexpr int kDefaultChi2Bins = 4;

/// Pearson chi-square on a bins x bins table of equal-probability (sample
/// quantile) cells; (bins-1)^2 degrees of freedom.
TestResult chi2_independence(std::span<const double> a, std::span<const double> b,
                             int bins = kDefaultChi2Bins);

/// One-sample KS with the asymptotic Kolmogorov p-value. When the CDF's
/// parameters were estimated from the same data the p-value is optimistic.
TestResult ks_test(std::span<const double> series, const std::function<double(double)>& cdf);

struct DistributionFit {
  int component = 1;        // 1 or 2
  std::string family;       // "gaussian" or "t-locscale"
  double mu = 0.0;
  double lambda = 0.0;      // Gaussian: sigma
  std::optional<double> eta;  // absent for the Gaussian
  double loglik = 0.0;
  double ks_p = 0.0;
};

struct FitReport {
  TransitionMatrix phi_hat;
  Matrix2 phi_se;
  Matrix2 residual_cov;
  double rho_z_hat = 0.0;
  std::vector<DistributionFit> dist_fits;
  std::vector<TestResult> test_results;
};

}  // namespace varprod
