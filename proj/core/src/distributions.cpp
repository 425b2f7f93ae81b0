#include "varprod/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "varprod/error.hpp"
#include "varprod/numerics.hpp"

namespace varprod {

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

// Fourth moments of a zero-mean Gaussian pair with covariance c (Isserlis).
std::array<double, 16> gaussian_fourth_moments(const Matrix2& c) {
  std::array<double, 16> m4{};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int n = 0; n < 2; ++n)
        for (int r = 0; r < 2; ++r)
          m4[8 * k + 4 * l + 2 * n + r] =
              c.at(k, l) * c.at(n, r) + c.at(k, n) * c.at(l, r) + c.at(k, r) * c.at(l, n);
  return m4;
}

MomentSet finish(const Matrix2& gamma_z, const std::array<double, 16>& m4) {
  MomentSet out;
  out.gamma_z = gamma_z;
  out.m4 = m4;
  out.m_z = out.fourth(0, 0, 1, 1);
  out.kappa_z = out.fourth(1, 1, 1, 1);
  return out;
}

double t_variance_factor(double eta) {
  if (!(eta > 2.0)) {
    throw HeavyTailError("Student's t variance is infinite for eta <= 2 (eta = " +
                         std::to_string(eta) + ")");
  }
  return eta / (eta - 2.0);
}

// E[T^4] / E[N^4] for the scale mixture, i.e. E[W^4] with W = 1 / sqrt(chi2 / eta).
double t_fourth_factor(double eta) {
  if (!(eta > 4.0)) {
    throw HeavyTailError("Student's t fourth moment is infinite for eta <= 4 (eta = " +
                         std::to_string(eta) + ")");
  }
  return eta * eta / ((eta - 2.0) * (eta - 4.0));
}

}  // namespace

const char* to_string(ResidualFamily family) noexcept {
  switch (family) {
    case ResidualFamily::BivariateGaussian:
      return "gaussian";
    case ResidualFamily::BivariateStudentT:
      return "t";
    case ResidualFamily::IndependentStudentT:
      return "t-indep";
  }
  return "unknown";
}

ResidualSpec ResidualSpec::gaussian(double sigma1, double sigma2, double rho) {
  ResidualSpec spec;
  spec.family = ResidualFamily::BivariateGaussian;
  spec.sigma1 = sigma1;
  spec.sigma2 = sigma2;
  spec.rho = rho;
  return spec;
}

ResidualSpec ResidualSpec::bivariate_t(double eta, double rho, double lambda1, double lambda2) {
  ResidualSpec spec;
  spec.family = ResidualFamily::BivariateStudentT;
  spec.eta = eta;
  spec.rho = rho;
  spec.lambda1 = lambda1;
  spec.lambda2 = lambda2;
  return spec;
}

ResidualSpec ResidualSpec::independent_t(double eta1, double eta2, double lambda1, double lambda2) {
  ResidualSpec spec;
  spec.family = ResidualFamily::IndependentStudentT;
  spec.rho = 0.0;
  spec.eta1 = eta1;
  spec.eta2 = eta2;
  spec.lambda1 = lambda1;
  spec.lambda2 = lambda2;
  return spec;
}

double t_scale_for_sd(double eta, double sd) { return sd / std::sqrt(t_variance_factor(eta)); }

void validate(const ResidualSpec& spec) {
  if (!std::isfinite(spec.mu1) || !std::isfinite(spec.mu2)) {
    throw ValidationError("residual shift parameters must be finite");
  }
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian:
      if (!positive_finite(spec.sigma1) || !positive_finite(spec.sigma2)) {
        throw ValidationError("Gaussian residual standard deviations must be positive");
      }
      if (!(std::fabs(spec.rho) < 1.0)) throw ValidationError("|rho| must be < 1");
      return;
    case ResidualFamily::BivariateStudentT:
      if (!positive_finite(spec.eta)) throw ValidationError("eta must be positive");
      if (!positive_finite(spec.lambda1) || !positive_finite(spec.lambda2)) {
        throw ValidationError("Student's t scales must be positive");
      }
      if (!(std::fabs(spec.rho) < 1.0)) throw ValidationError("|rho| must be < 1");
      return;
    case ResidualFamily::IndependentStudentT:
      if (!positive_finite(spec.eta1) || !positive_finite(spec.eta2)) {
        throw ValidationError("eta1 and eta2 must be positive");
      }
      if (!positive_finite(spec.lambda1) || !positive_finite(spec.lambda2)) {
        throw ValidationError("Student's t scales must be positive");
      }
      return;
  }
  throw ValidationError("unknown residual family");
}

bool has_independent_components(const ResidualSpec& spec) {
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian:
      return spec.rho == 0.0;
    case ResidualFamily::BivariateStudentT:
      return false;
    case ResidualFamily::IndependentStudentT:
      return true;
  }
  return false;
}

double component_dof(const ResidualSpec& spec, int component) {
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian:
      return std::numeric_limits<double>::infinity();
    case ResidualFamily::BivariateStudentT:
      return spec.eta;
    case ResidualFamily::IndependentStudentT:
      return component == 0 ? spec.eta1 : spec.eta2;
  }
  return std::numeric_limits<double>::infinity();
}

Matrix2 residual_covariance(const ResidualSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian: {
      const double c = spec.rho * spec.sigma1 * spec.sigma2;
      return {spec.sigma1 * spec.sigma1, c, c, spec.sigma2 * spec.sigma2};
    }
    case ResidualFamily::BivariateStudentT: {
      const double f = t_variance_factor(spec.eta);
      const double c = f * spec.rho * spec.lambda1 * spec.lambda2;
      return {f * spec.lambda1 * spec.lambda1, c, c, f * spec.lambda2 * spec.lambda2};
    }
    case ResidualFamily::IndependentStudentT:
      return {t_variance_factor(spec.eta1) * spec.lambda1 * spec.lambda1, 0.0, 0.0,
              t_variance_factor(spec.eta2) * spec.lambda2 * spec.lambda2};
  }
  throw ValidationError("unknown residual family");
}

MomentSet independent_moments(double var1, double var2, double fourth1, double fourth2) {
  std::array<double, 16> m4{};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int n = 0; n < 2; ++n)
        for (int r = 0; r < 2; ++r) {
          const int ones = k + l + n + r;  // how many indices refer to component 2
          double value = 0.0;
          if (ones == 0) {
            value = fourth1;
          } else if (ones == 4) {
            value = fourth2;
          } else if (ones == 2) {
            value = var1 * var2;
          }
          m4[8 * k + 4 * l + 2 * n + r] = value;
        }
  return finish({var1, 0.0, 0.0, var2}, m4);
}

MomentSet moments(const ResidualSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian: {
      const Matrix2 gamma_z = residual_covariance(spec);
      return finish(gamma_z, gaussian_fourth_moments(gamma_z));
    }
    case ResidualFamily::BivariateStudentT: {
      const double w4 = t_fourth_factor(spec.eta);
      const double c = spec.rho * spec.lambda1 * spec.lambda2;
      const Matrix2 unit{spec.lambda1 * spec.lambda1, c, c, spec.lambda2 * spec.lambda2};
      auto m4 = gaussian_fourth_moments(unit);
      for (double& v : m4) v *= w4;
      return finish(residual_covariance(spec), m4);
    }
    case ResidualFamily::IndependentStudentT: {
      const double l1sq = spec.lambda1 * spec.lambda1;
      const double l2sq = spec.lambda2 * spec.lambda2;
      const double fourth1 = 3.0 * l1sq * l1sq * t_fourth_factor(spec.eta1);
      const double fourth2 = 3.0 * l2sq * l2sq * t_fourth_factor(spec.eta2);
      return independent_moments(t_variance_factor(spec.eta1) * l1sq,
                                 t_variance_factor(spec.eta2) * l2sq, fourth1, fourth2);
    }
  }
  throw ValidationError("unknown residual family");
}

double log_marginal_pdf_t(double z, double eta, double mu, double lambda) {
  if (!positive_finite(eta) || !positive_finite(lambda)) {
    throw DomainError("Student's t density requires eta > 0 and lambda > 0");
  }
  const double u = (z - mu) / lambda;
  return numerics::log_gamma(0.5 * (eta + 1.0)) - numerics::log_gamma(0.5 * eta) -
         0.5 * std::log(eta * std::numbers::pi) - std::log(lambda) -
         0.5 * (eta + 1.0) * std::log1p(u * u / eta);
}

double marginal_pdf_t(double z, double eta, double mu, double lambda) {
  return std::exp(log_marginal_pdf_t(z, eta, mu, lambda));
}

double cdf_t(double z, double eta) {
  if (!positive_finite(eta)) throw DomainError("cdf_t requires eta > 0");
  if (std::isnan(z)) throw DomainError("cdf_t: NaN argument");
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  if (z == 0.0) return 0.5;
  const double x = eta / (eta + z * z);
  const double tail = 0.5 * numerics::regularized_incomplete_beta(0.5 * eta, 0.5, x);
  return z > 0.0 ? 1.0 - tail : tail;
}

double pdf(const ResidualSpec& spec, double z1, double z2) {
  validate(spec);
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian: {
      const double u = (z1 - spec.mu1) / spec.sigma1;
      const double v = (z2 - spec.mu2) / spec.sigma2;
      const double one_minus = 1.0 - spec.rho * spec.rho;
      const double q = (u * u - 2.0 * spec.rho * u * v + v * v) / one_minus;
      return std::exp(-0.5 * q) /
             (2.0 * std::numbers::pi * spec.sigma1 * spec.sigma2 * std::sqrt(one_minus));
    }
    case ResidualFamily::BivariateStudentT: {
      const double u = (z1 - spec.mu1) / spec.lambda1;
      const double v = (z2 - spec.mu2) / spec.lambda2;
      const double one_minus = 1.0 - spec.rho * spec.rho;
      const double q = (u * u - 2.0 * spec.rho * u * v + v * v) / (spec.eta * one_minus);
      return std::pow(1.0 + q, -0.5 * (spec.eta + 2.0)) /
             (2.0 * std::numbers::pi * std::sqrt(one_minus) * spec.lambda1 * spec.lambda2);
    }
    case ResidualFamily::IndependentStudentT:
      return marginal_pdf_t(z1, spec.eta1, spec.mu1, spec.lambda1) *
             marginal_pdf_t(z2, spec.eta2, spec.mu2, spec.lambda2);
  }
  throw ValidationError("unknown residual family");
}

double sample_t(double eta, RandomStream& rng) {
  const double n = rng.standard_normal();
  return n / std::sqrt(rng.chi_square(eta) / eta);
}

std::pair<double, double> sample_pair(const ResidualSpec& spec, RandomStream& rng) {
  validate(spec);
  switch (spec.family) {
    case ResidualFamily::BivariateGaussian: {
      const double n1 = rng.standard_normal();
      const double n2 = rng.standard_normal();
      return {spec.mu1 + spec.sigma1 * n1,
              spec.mu2 + spec.sigma2 * (spec.rho * n1 + std::sqrt(1.0 - spec.rho * spec.rho) * n2)};
    }
    case ResidualFamily::BivariateStudentT: {
      const double n1 = rng.standard_normal();
      const double n2 = rng.standard_normal();
      const double w = 1.0 / std::sqrt(rng.chi_square(spec.eta) / spec.eta);
      const double c2 = spec.rho * n1 + std::sqrt(1.0 - spec.rho * spec.rho) * n2;
      return {spec.mu1 + spec.lambda1 * n1 * w, spec.mu2 + spec.lambda2 * c2 * w};
    }
    case ResidualFamily::IndependentStudentT: {
      const double t1 = sample_t(spec.eta1, rng);
      const double t2 = sample_t(spec.eta2, rng);
      return {spec.mu1 + spec.lambda1 * t1, spec.mu2 + spec.lambda2 * t2};
    }
  }
  throw ValidationError("unknown residual family");
}

}  // namespace varprod
