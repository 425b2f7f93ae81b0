#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "varprod/product_acvf.hpp"
#include "varprod/random.hpp"
#include "varprod/var1.hpp"

namespace varprod {

/// Sample autocovariance (1/n) sum_{t} (y_t - ybar)(y_{t+h} - ybar), lags 0..hmax.
AcvfCurve empirical_acvf(std::span<const double> series, int hmax);

/// Sample cross-covariance (1/n) sum_t (a_t - abar)(b_{t+h} - bbar), lags 0..hmax.
AcvfCurve empirical_ccvf(std::span<const double> a, std::span<const double> b, int hmax);

/// Pearson correlation; throws NumericError when either variance is zero.
double sample_correlation(std::span<const double> a, std::span<const double> b);

/// Empirical quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending.
double quantile_type7(std::span<const double> sorted, double level);

struct ConfidenceBand {
  std::vector<int> lags;
  std::vector<double> lower;
  std::vector<double> upper;
  double level_low = 0.05;
  double level_high = 0.95;
  std::size_t reps = 0;
  std::size_t n = 0;
};

struct McBandConfig {
  std::size_t n = 1000;
  std::size_t reps = 1000;
  int hmax = 10;
  double level_low = 0.05;
  double level_high = 0.95;
  std::size_t burnin = kDefaultBurnin;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Test hook: every replication reuses substream 0.
  bool identical_streams = false;
};

/// Per-lag quantile band of the product-series empirical ACVF over `reps`
/// independent simulations; replication r draws from rng.substream(r), so the
/// result is independent of the thread count.
ConfidenceBand mc_confidence_bounds(const Var1Model& model, const McBandConfig& config,
                                    const RandomStream& rng);

/// Fraction of lags at which curve.values[h] lies inside [lower, upper].
double band_coverage(const AcvfCurve& curve, const ConfidenceBand& band);

}  // namespace varprod
