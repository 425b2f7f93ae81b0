#include "varprod/product_acvf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varprod/error.hpp"

namespace varprod {

namespace {

void require_lag(int h) {
  if (h < 0) throw DomainError("lag must be non-negative");
}

void require_inside_unit(double phi, const char* name) {
  if (!(std::fabs(phi) < 1.0)) {
    throw InstabilityError(std::string("|") + name + "| must be < 1");
  }
}

// ACVF of X2 when it is an AR(1) driven by Z2 alone (phi21 = 0).
double ar1_acvf(double phi, double sigma_sq, int h) {
  return sigma_sq * std::pow(phi, h) / (1.0 - phi * phi);
}

double case3_mean(const TransitionMatrix& phi, double sigma2_sq) {
  const double p11 = phi.phi11;
  const double p22 = phi.phi22;
  if (p11 == p22) return sigma2_sq * p22 * phi.phi12 / ((1.0 - p11 * p22) * (1.0 - p11 * p22));
  return sigma2_sq * phi.phi12 / (p22 - p11) *
         (p22 * p22 / (1.0 - p22 * p22) - p11 * p22 / (1.0 - p22 * p11));
}

}  // namespace

const char* to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::Case1:
      return "Case1";
    case CaseTag::Case2:
      return "Case2";
    case CaseTag::Case3:
      return "Case3";
    case CaseTag::General:
      return "General";
    case CaseTag::Case1MeanShift:
      return "Case1MeanShift";
  }
  return "General";
}

CaseTag case_tag_from_string(std::string_view name) {
  if (name == "Case1") return CaseTag::Case1;
  if (name == "Case2") return CaseTag::Case2;
  if (name == "Case3") return CaseTag::Case3;
  if (name == "General") return CaseTag::General;
  if (name == "Case1MeanShift") return CaseTag::Case1MeanShift;
  throw ValidationError("unknown case tag '" + std::string(name) + "'");
}

std::vector<double> product_series(const Trajectory& traj, double mean_shift) {
  if (traj.x1.size() != traj.x2.size()) throw LengthError("trajectory components differ in length");
  std::vector<double> y(traj.x1.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = (traj.x1[t] + mean_shift) * traj.x2[t];
  return y;
}

CaseTag classify_case(const Var1Model& model) {
  const auto& phi = model.phi;
  const bool independent = has_independent_components(model.residual);
  if (phi.phi12 == 0.0 && phi.phi21 == 0.0) return independent ? CaseTag::Case1 : CaseTag::Case2;
  if (phi.phi21 == 0.0 && independent) return CaseTag::Case3;
  return CaseTag::General;
}

double mean_product(const Var1Model& model) {
  validate(model);
  const Matrix2 gamma = residual_covariance(model.residual);
  switch (classify_case(model)) {
    case CaseTag::Case1:
    case CaseTag::Case1MeanShift:
      return 0.0;
    case CaseTag::Case2:
      return gamma.a12 / (1.0 - model.phi.phi11 * model.phi.phi22);
    case CaseTag::Case3:
      return case3_mean(model.phi, gamma.a22);
    case CaseTag::General:
      break;
  }
  return stationary_moments(model).gamma_x12;
}

double acvf_general_numeric(const TransitionMatrix& phi, const MomentSet& m, int h, double tol) {
  require_lag(h);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const Matrix2& g = m.gamma_z;
  double m4_scale = g.max_abs() * g.max_abs();
  for (double v : m.m4) m4_scale = std::max(m4_scale, std::fabs(v));
  m4_scale = std::max(m4_scale, 1e-300);

  // Second-order sums enter as products with factors bounded by the
  // stationary variances, so their tails are held to a proportionally smaller tol.
  const int j2 = series_truncation(phi, 2, 4.0 * (1.0 + h) * (1.0 + h) * std::max(g.max_abs(), 1e-300), 1e-3 * tol);
  const auto p2 = phi_powers(phi, j2);
  double var_bound = 0.0;
  for (const Matrix2& p : p2) var_bound += 4.0 * p.max_abs() * p.max_abs() * g.max_abs();
  const int j_second = series_truncation(
      phi, 2, 4.0 * (1.0 + h) * (1.0 + h) * std::max(g.max_abs(), 1e-300), tol / (1.0 + 2.0 * var_bound));
  const int j_fourth =
      series_truncation(phi, 4, 16.0 * std::pow(1.0 + h, 2) * m4_scale, tol);
  const int terms = std::max(j_second, j_fourth);
  const auto pw = phi_powers(phi, terms + h);

  // lag_cov(j) = Phi^j Gamma (Phi^{j+h})^T, same_cov(j) = Phi^j Gamma (Phi^j)^T
  auto lag_cov = [&](int j) { return pw[j] * g * pw[j + h].transposed(); };

  double all_equal = 0.0;
  double paired_same_time = 0.0;  // sum_j c_j c_{j+h}
  double paired_auto = 0.0;       // sum_j a_j b_j
  double paired_cross = 0.0;      // sum_j d_j e_j
  double acvf1 = 0.0;
  double acvf2 = 0.0;
  double ccvf12 = 0.0;
  double ccvf21 = 0.0;
  for (int j = 0; j < terms; ++j) {
    const Matrix2& a = pw[j];
    const Matrix2& b = pw[j + h];
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const double left = a.at(0, k) * a.at(1, l);
        if (left == 0.0) continue;
        for (int n = 0; n < 2; ++n)
          for (int r = 0; r < 2; ++r) all_equal += left * b.at(0, n) * b.at(1, r) * m.fourth(k, l, n, r);
      }
    const Matrix2 c_now = a * g * a.transposed();
    const Matrix2 c_later = b * g * b.transposed();
    paired_same_time += c_now.a12 * c_later.a12;
    const Matrix2 lc = lag_cov(j);
    paired_auto += lc.a11 * lc.a22;
    paired_cross += lc.a12 * lc.a21;
    acvf1 += lc.a11;
    acvf2 += lc.a22;
    ccvf12 += lc.a12;
    ccvf21 += lc.a21;
  }
  return all_equal - paired_same_time + (acvf1 * acvf2 - paired_auto) +
         (ccvf12 * ccvf21 - paired_cross);
}

double acvf_general_numeric(const Var1Model& model, int h, double tol) {
  validate(model);
  const MomentSet m = moments(model.residual);
  double value = acvf_general_numeric(model.phi, m, h, tol);
  if (model.mean_shift != 0.0) {
    value += model.mean_shift * model.mean_shift * acvf_component(model, 1, h);
  }
  return value;
}

double acvf_case1(double phi11, double phi22, double sigma1_sq, double sigma2_sq, int h) {
  require_lag(h);
  require_inside_unit(phi11, "phi11");
  require_inside_unit(phi22, "phi22");
  return sigma1_sq * sigma2_sq * std::pow(phi11 * phi22, h) /
         ((1.0 - phi11 * phi11) * (1.0 - phi22 * phi22));
}

double acvf_case2(double phi11, double phi22, const MomentSet& m, int h) {
  require_lag(h);
  require_inside_unit(phi11, "phi11");
  require_inside_unit(phi22, "phi22");
  if (!std::isfinite(m.m_z)) throw HeavyTailError("m_Z = E[Z1^2 Z2^2] is not finite");
  const double s1s2 = m.gamma_z.a11 * m.gamma_z.a22;
  const double cov_sq = m.gamma_z.a12 * m.gamma_z.a12;  // rho^2 sigma1^2 sigma2^2
  const double p = phi11 * phi22;
  return std::pow(p, h) * ((m.m_z - s1s2 - 2.0 * cov_sq) / (1.0 - p * p) +
                           s1s2 / ((1.0 - phi11 * phi11) * (1.0 - phi22 * phi22)) +
                           cov_sq / ((1.0 - p) * (1.0 - p)));
}

double acvf_case3(double phi12, double phi22, const MomentSet& m, int h) {
  require_lag(h);
  require_inside_unit(phi22, "phi22");
  if (!std::isfinite(m.kappa_z)) throw HeavyTailError("kappa_Z = E[Z2^4] is not finite");
  const double s1sq = m.gamma_z.a11;
  const double s2sq = m.gamma_z.a22;
  const double s2_4 = s2sq * s2sq;
  const double p2 = phi22 * phi22;
  const double excess = p2 * (m.kappa_z - 3.0 * s2_4) / (1.0 - p2 * p2);
  const double denom = (1.0 - p2) * (1.0 - p2);
  if (h == 0) {
    return phi12 * phi12 * (excess + (1.0 + p2) * s2_4 / denom) + s1sq * s2sq / (1.0 - p2);
  }
  return phi12 * phi12 * std::pow(phi22, 2 * h) * (excess + 2.0 * s2_4 / denom);
}

double acvf_case1_meanshift(double phi11, double phi22, double sigma1_sq, double sigma2_sq,
                            double mu_x, int h) {
  return acvf_case1(phi11, phi22, sigma1_sq, sigma2_sq, h) +
         mu_x * mu_x * ar1_acvf(phi22, sigma2_sq, h);
}

AcvfCurve theoretical_acvf(const Var1Model& model, int hmax, AcvfMode mode) {
  if (hmax < 0) throw DomainError("hmax must be non-negative");
  validate(model);
  AcvfCurve curve;
  curve.case_tag = classify_case(model);
  for (int h = 0; h <= hmax; ++h) curve.lags.push_back(h);
  curve.values.reserve(curve.lags.size());

  const auto& phi = model.phi;
  const bool closed_available =
      curve.case_tag != CaseTag::General &&
      !(curve.case_tag == CaseTag::Case3 && phi.phi11 != 0.0);
  if (mode == AcvfMode::Closed && !closed_available) {
    throw ValidationError(std::string("no closed form for this model (") + to_string(curve.case_tag) +
                          (curve.case_tag == CaseTag::Case3 ? " with phi11 != 0)" : ")"));
  }

  if (mode == AcvfMode::Numeric || (mode == AcvfMode::Auto && !closed_available)) {
    for (int h = 0; h <= hmax; ++h) curve.values.push_back(acvf_general_numeric(model, h));
    if (curve.case_tag == CaseTag::Case1 && model.mean_shift != 0.0) {
      curve.case_tag = CaseTag::Case1MeanShift;
    }
    return curve;
  }

  const Matrix2 gamma = residual_covariance(model.residual);
  const double mu = model.mean_shift;
  switch (curve.case_tag) {
    case CaseTag::Case1:
      for (int h = 0; h <= hmax; ++h) {
        curve.values.push_back(
            acvf_case1_meanshift(phi.phi11, phi.phi22, gamma.a11, gamma.a22, mu, h));
      }
      if (mu != 0.0) curve.case_tag = CaseTag::Case1MeanShift;
      break;
    case CaseTag::Case2: {
      const MomentSet m = moments(model.residual);
      for (int h = 0; h <= hmax; ++h) {
        curve.values.push_back(acvf_case2(phi.phi11, phi.phi22, m, h) +
                               mu * mu * ar1_acvf(phi.phi22, gamma.a22, h));
      }
      break;
    }
    case CaseTag::Case3: {
      const MomentSet m = moments(model.residual);
      for (int h = 0; h <= hmax; ++h) {
        curve.values.push_back(acvf_case3(phi.phi12, phi.phi22, m, h) +
                               mu * mu * ar1_acvf(phi.phi22, gamma.a22, h));
      }
      break;
    }
    default:
      throw ValidationError("no closed form for this model");
  }
  return curve;
}

}  // namespace varprod
