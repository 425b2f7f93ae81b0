#pragma once

#include <array>
#include <utility>

#include "varprod/matrix2.hpp"
#include "varprod/random.hpp"

namespace varprod {

enum class ResidualFamily { BivariateGaussian, BivariateStudentT, IndependentStudentT };

const char* to_string(ResidualFamily family) noexcept;

/// Law of the residual pair (Z1, Z2).
///
/// BivariateGaussian uses sigma1/sigma2 (standard deviations) and rho.
/// BivariateStudentT is mu + lambda * (N1, N2) / sqrt(chi2_eta / eta) with
/// corr(N1, N2) = rho; its marginal variance is lambda^2 eta / (eta - 2) and
/// rho = 0 does not make the components independent.
/// IndependentStudentT has components mu_i + lambda_i * T_{eta_i}; rho is ignored.
struct ResidualSpec {
  ResidualFamily family = ResidualFamily::BivariateGaussian;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;
  double eta = 5.0;
  double eta1 = 5.0;
  double eta2 = 5.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;

  static ResidualSpec gaussian(double sigma1, double sigma2, double rho);
  static ResidualSpec bivariate_t(double eta, double rho, double lambda1 = 1.0, double lambda2 = 1.0);
  static ResidualSpec independent_t(double eta1, double eta2, double lambda1 = 1.0,
                                    double lambda2 = 1.0);

  friend bool operator==(const ResidualSpec&, const ResidualSpec&) = default;
};

/// Scale lambda giving a Student's t marginal standard deviation `sd`.
double t_scale_for_sd(double eta, double sd);

/// Throws ValidationError when parameters are out of range.
void validate(const ResidualSpec& spec);

/// True when Z1 and Z2 are independent (Gaussian with rho == 0, or IndependentStudentT).
bool has_independent_components(const ResidualSpec& spec);

/// Degrees of freedom of component i (0 or 1); infinity for the Gaussian.
double component_dof(const ResidualSpec& spec, int component);

/// Covariance matrix Gamma_Z. Throws HeavyTailError when a variance is infinite.
Matrix2 residual_covariance(const ResidualSpec& spec);

/// Second and fourth moments of the centred residual pair. Indices are 0-based.
struct MomentSet {
  Matrix2 gamma_z;
  std::array<double, 16> m4{};  // E[Z_k Z_l Z_n Z_r], flat index 8k + 4l + 2n + r
  double m_z = 0.0;             // E[Z1^2 Z2^2]
  double kappa_z = 0.0;         // E[Z2^4]

  double fourth(int k, int l, int n, int r) const noexcept { return m4[8 * k + 4 * l + 2 * n + r]; }
};

/// Exact moments; throws HeavyTailError when a Student's t dof is <= 4.
MomentSet moments(const ResidualSpec& spec);

/// Moment set for an independent pair with given variances and fourth moments.
MomentSet independent_moments(double var1, double var2, double fourth1, double fourth2);

double pdf(const ResidualSpec& spec, double z1, double z2);

/// Density of mu + lambda * T_eta at z.
double marginal_pdf_t(double z, double eta, double mu, double lambda);
double log_marginal_pdf_t(double z, double eta, double mu, double lambda);

/// CDF of the standard Student's t with eta degrees of freedom.
double cdf_t(double z, double eta);

/// One draw of (Z1, Z2).
std::pair<double, double> sample_pair(const ResidualSpec& spec, RandomStream& rng);

/// One draw of a standard Student's t variate.
double sample_t(double eta, RandomStream& rng);

}  // namespace varprod
