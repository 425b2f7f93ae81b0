#pragma once

#include <string_view>
#include <vector>

#include "varprod/distributions.hpp"
#include "varprod/var1.hpp"

namespace varprod {

/// Dependence structure between the two VAR(1) components.
///   Case1: phi12 = phi21 = 0, independent residual components.
///   Case2: phi12 = phi21 = 0, dependent residual components.
///   Case3: phi21 = 0, phi12 != 0, independent residual components.
enum class CaseTag { Case1, Case2, Case3, General, Case1MeanShift };

const char* to_string(CaseTag tag) noexcept;
CaseTag case_tag_from_string(std::string_view name);

struct AcvfCurve {
  std::vector<int> lags;
  std::vector<double> values;
  CaseTag case_tag = CaseTag::General;
};

/// y(t) = (x1(t) + mean_shift) * x2(t).
std::vector<double> product_series(const Trajectory& traj, double mean_shift = 0.0);

CaseTag classify_case(const Var1Model& model);

/// E[Y(t)], which equals gamma_{X,1,2} because the residuals are centred.
double mean_product(const Var1Model& model);

/// Autocovariance of X1(t) X2(t) from the four-index representation, keeping
/// only index patterns whose residual times coincide (all four equal, or in
/// two pairs). Sums are truncated once the geometric tail bound is below tol.
double acvf_general_numeric(const TransitionMatrix& phi, const MomentSet& moments, int h,
                            double tol = 1e-12);

/// Same for the model's product (X1 + mean_shift) X2. The shift contributes
/// mean_shift^2 * ACVF_X2(h); cross terms are third moments of a symmetric
/// residual law and vanish. Throws HeavyTailError when fourth moments diverge.
double acvf_general_numeric(const Var1Model& model, int h, double tol = 1e-12);

/// Closed forms for the special cases.
double acvf_case1(double phi11, double phi22, double sigma1_sq, double sigma2_sq, int h);
double acvf_case2(double phi11, double phi22, const MomentSet& moments, int h);
/// Requires phi11 = 0 and phi21 = 0 (asserted by the caller).
double acvf_case3(double phi12, double phi22, const MomentSet& moments, int h);
double acvf_case1_meanshift(double phi11, double phi22, double sigma1_sq, double sigma2_sq,
                            double mu_x, int h);

enum class AcvfMode { Closed, Numeric, Auto };

/// Theoretical ACVF of the product for lags 0..hmax. Closed mode throws
/// ValidationError when no closed form applies (General, or Case3 with
/// phi11 != 0); Auto falls back to the numeric evaluator in that situation.
AcvfCurve theoretical_acvf(const Var1Model& model, int hmax, AcvfMode mode = AcvfMode::Auto);

}  // namespace varprod
