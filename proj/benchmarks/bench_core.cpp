#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "varprod/estimators.hpp"
#include "varprod/inference.hpp"
#include "varprod/product_acvf.hpp"
#include "varprod/random.hpp"
#include "varprod/var1.hpp"

using namespace varprod;

namespace {

Var1Model t_model() {
  return {TransitionMatrix{0.8, 0.3, 0.1, -0.5}, ResidualSpec::independent_t(5.0, 5.0), 0.0};
}

void BM_PhiPower(benchmark::State& state) {
  const TransitionMatrix phi{0.8, 0.3, 0.1, -0.5};
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phi_power(phi, j));
}
BENCHMARK(BM_PhiPower)->Arg(1)->Arg(50)->Arg(1000);

void BM_AcvfGeneralNumeric(benchmark::State& state) {
  const Var1Model model = t_model();
  const int h = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(acvf_general_numeric(model, h));
}
BENCHMARK(BM_AcvfGeneralNumeric)->Arg(0)->Arg(10);

void BM_McBand(benchmark::State& state) {
  const Var1Model model = t_model();
  McBandConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.reps = 200;
  cfg.hmax = 10;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc_confidence_bounds(model, cfg, RandomStream(7)));
}
BENCHMARK(BM_McBand)->Arg(260)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FitT(benchmark::State& state) {
  RandomStream rng(11);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = 2.0 * rng.standard_normal() / std::sqrt(rng.chi_square(4.0) / 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_t_locscale(x, true));
}
BENCHMARK(BM_FitT)->Arg(260)->Arg(5000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
