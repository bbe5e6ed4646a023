#include <benchmark/benchmark.h>

#include "adhoccap/asymptotic.hpp"
#include "adhoccap/numerics.hpp"
#include "adhoccap/simulator.hpp"

namespace {

void BM_ExpIntegralE1(benchmark::State& state) {
  double x = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adhoccap::numerics::exp_integral_e1(x));
    x = x < 40.0 ? x * 1.1 : 1e-3;
  }
}
BENCHMARK(BM_ExpIntegralE1);

void BM_MmseThreshold(benchmark::State& state) {
  adhoccap::SystemConfig cfg;
  cfg.timing = state.range(0) ? adhoccap::TimingMode::Asynchronous
                              : adhoccap::TimingMode::Synchronous;
  const double alpha = cfg.timing == adhoccap::TimingMode::Synchronous ? 38.0 / 32 : 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(adhoccap::achievable_prob(cfg, alpha));
}
BENCHMARK(BM_MmseThreshold)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_MonteCarloTrial(benchmark::State& state) {
  adhoccap::sim::SimConfig cfg;
  cfg.receiver = static_cast<adhoccap::ReceiverKind>(state.range(0));
  cfg.power = adhoccap::PowerBudget::max_snr(1e4);
  cfg.spreading_gain = 32;
  cfg.nodes = static_cast<int>(state.range(1));
  int trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adhoccap::sim::run_trial(cfg, trial));
    trial = (trial + 1) % cfg.trials;
  }
}
BENCHMARK(BM_MonteCarloTrial)
    ->Args({0, 57})
    ->Args({2, 57})
    ->Args({2, 144})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
