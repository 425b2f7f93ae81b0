#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "varprod/estimators.hpp"
#include "varprod/inference.hpp"
#include "varprod/market_data.hpp"
#include "varprod/product_acvf.hpp"
#include "varprod/var1.hpp"

namespace varprod {

struct CaseStudyConfig {
  int hmax = 20;
  std::size_t reps = 1000;
  /// Significance level of the Case-1 gate.
  double alpha = 0.05;
  int chi2_bins = kDefaultChi2Bins;
  std::uint64_t seed = 20160101;
  std::size_t burnin = kDefaultBurnin;
  unsigned threads = 0;
};

inline constexpr std::size_t kMinCaseStudyLength = 30;

struct CaseStudyReport {
  double mu_x = 0.0;
  FitReport fit;
  /// Diagonal refit when the Case-1 gate passed, else the full fit.
  TransitionMatrix model_phi;
  bool case1_selected = false;
  /// "t-indep" or "gaussian": residual law used for the theoretical curve and the band.
  std::string residual_model;
  CaseTag case_tag = CaseTag::General;
  AcvfCurve theoretical_acvf;
  AcvfCurve empirical_acvf;
  ConfidenceBand band;
  double coverage_fraction = 0.0;
  std::uint64_t seed = 0;

  std::vector<std::int64_t> timestamps;
  Trajectory trajectory;  // demeaned prices, errors
  Trajectory residuals;   // from the selected model, length n - 1
};

/// End-to-end analysis of a price series and a load-error series sampled on
/// the same (typically weekly) grid:
///   1. demean prices (mu_x is their sample mean)
///   2. Yule-Walker fit of the full VAR(1) and residual diagnostics
///   3. Case-1 gate: off-diagonal entries insignificant and neither the
///      correlation t test nor the chi-square test rejects at alpha
///   4. Case-1 refit by per-component scalar Yule-Walker with independent
///      zero-mean t residuals, or a Gaussian model with the fitted residual
///      covariance otherwise
///   5. theoretical, empirical and simulated ACVF of price * error.
CaseStudyReport run_case_study(const MarketSeries& prices, const MarketSeries& errors,
                               const CaseStudyConfig& config);

}  // namespace varprod
