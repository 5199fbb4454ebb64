#include <benchmark/benchmark.h>

#include <map>

#include "routerlab/cascade.hpp"
#include "routerlab/pre_router.hpp"
#include "routerlab/synthetic.hpp"

using namespace routerlab;

namespace {

const Dataset& data(std::size_t n) {
  static std::map<std::size_t, Dataset> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Dataset::from_questions(generate_synthetic(42, n))).first;
  return it->second;
}

void BM_PreSweep(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  PreSweepOptions o;
  o.score_source = ScoreSource::kRefusal;
  o.taus = tau_grid(0.0, 1.0, 0.01);
  o.execution = state.range(1) ? Execution::kParallel : Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_pre(d, PricingSchedule{}, o));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(o.taus.size()));
}

void BM_CascadeSweep(benchmark::State& state) {
  const Dataset& d = data(static_cast<std::size_t>(state.range(0)));
  CascadeSweepOptions o;
  o.config.scheme = Scheme::kRcv;
  o.taus = tau_grid(0.0, 1.0, 0.01);
  o.execution = state.range(1) ? Execution::kParallel : Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_cascade(d, PricingSchedule{}, o));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(o.taus.size()));
}

}  // namespace

// second argument: 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_PreSweep)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CascadeSweep)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
