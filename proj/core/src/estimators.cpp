#include "varprod/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "varprod/error.hpp"

namespace varprod {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

AcvfCurve empirical_ccvf(std::span<const double> a, std::span<const double> b, int hmax) {
  if (hmax < 0) throw DomainError("hmax must be non-negative");
  if (a.size() != b.size()) throw LengthError("series lengths differ");
  if (a.size() <= static_cast<std::size_t>(hmax)) {
    throw LengthError("series length " + std::to_string(a.size()) + " must exceed hmax " +
                      std::to_string(hmax));
  }
  const std::size_t n = a.size();
  const double abar = mean_of(a);
  const double bbar = mean_of(b);
  AcvfCurve curve;
  curve.case_tag = CaseTag::General;
  for (int h = 0; h <= hmax; ++h) {
    double sum = 0.0;
    for (std::size_t t = 0; t + h < n; ++t) sum += (a[t] - abar) * (b[t + h] - bbar);
    curve.lags.push_back(h);
    curve.values.push_back(sum / static_cast<double>(n));
  }
  return curve;
}

AcvfCurve empirical_acvf(std::span<const double> series, int hmax) {
  return empirical_ccvf(series, series, hmax);
}

double sample_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LengthError("series lengths differ");
  if (a.size() < 2) throw LengthError("correlation needs at least two points");
  const double abar = mean_of(a);
  const double bbar = mean_of(b);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double da = a[t] - abar;
    const double db = b[t] - bbar;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw NumericError("correlation of a constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double quantile_type7(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw LengthError("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConfidenceBand mc_confidence_bounds(const Var1Model& model, const McBandConfig& config,
                                    const RandomStream& rng) {
  validate(model);
  if (config.reps < 2) throw ValidationError("mc_confidence_bounds needs reps >= 2");
  if (config.hmax < 0) throw DomainError("hmax must be non-negative");
  if (config.n <= static_cast<std::size_t>(config.hmax)) {
    throw ValidationError("trajectory length must exceed hmax");
  }
  if (!(config.level_low >= 0.0 && config.level_low <= config.level_high &&
        config.level_high <= 1.0)) {
    throw ValidationError("confidence levels must satisfy 0 <= low <= high <= 1");
  }

  const std::size_t lags = static_cast<std::size_t>(config.hmax) + 1;
  // curves[h * reps + r]: lag-major so each lag's sample is contiguous for sorting.
  std::vector<double> curves(lags * config.reps);

  std::vector<std::exception_ptr> failures(config.reps);
  auto run_range = [&](std::size_t begin, std::size_t end) noexcept {
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream = rng.substream(config.identical_streams ? 0 : r);
      try {
        const Trajectory traj = simulate(model, config.n, config.burnin, stream);
        const auto y = product_series(traj, model.mean_shift);
        const AcvfCurve acvf = empirical_acvf(y, config.hmax);
        for (std::size_t h = 0; h < lags; ++h) curves[h * config.reps + r] = acvf.values[h];
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.reps)));
  if (threads == 1) {
    run_range(0, config.reps);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (config.reps + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(config.reps, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(run_range, begin, end);
    }
  }

  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  ConfidenceBand band;
  band.level_low = config.level_low;
  band.level_high = config.level_high;
  band.reps = config.reps;
  band.n = config.n;
  for (std::size_t h = 0; h < lags; ++h) {
    std::span<double> sample(curves.data() + h * config.reps, config.reps);
    std::sort(sample.begin(), sample.end());
    band.lags.push_back(static_cast<int>(h));
    band.lower.push_back(quantile_type7(sample, config.level_low));
    band.upper.push_back(quantile_type7(sample, config.level_high));
  }
  return band;
}

double band_coverage(const AcvfCurve& curve, const ConfidenceBand& band) {
  const std::size_t count = std::min(curve.values.size(), band.lower.size());
  if (count == 0) return 0.0;
  std::size_t inside = 0;
  for (std::size_t h = 0; h < count; ++h) {
    if (curve.values[h] >= band.lower[h] && curve.values[h] <= band.upper[h]) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(count);
}

}  // namespace varprod
