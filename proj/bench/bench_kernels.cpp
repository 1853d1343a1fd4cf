#include <benchmark/benchmark.h>

#include <omp.h>

#include "wrt/experiment.hpp"
#include "wrt/oracle.hpp"

namespace {

wrt::ReplicatePlan plan(std::int64_t n) {
  wrt::ReplicatePlan p;
  p.law = wrt::WeightLaw::beta(2, 3);
  p.n = static_cast<std::size_t>(n);
  p.seed = 7;
  return p;
}

void BM_ReplicatesSerial(benchmark::State& state) {
  const auto p = plan(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wrt::runReplicatesSerial(p, 0, 32));
  state.SetItemsProcessed(state.iterations() * 32 * state.range(0));
}

void BM_ReplicatesParallel(benchmark::State& state) {
  const auto p = plan(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wrt::runReplicates(p, 0, 32));
  state.SetItemsProcessed(state.iterations() * 32 * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void oracle(benchmark::State& state, bool parallel) {
  wrt::OracleOptions opt;
  opt.replicates = 64;
  opt.parallel = parallel;
  const auto law = wrt::WeightLaw::beta(2, 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wrt::unconditionalDegreeLaw(law, n, 1, opt));
}

void BM_OracleSerial(benchmark::State& state) { oracle(state, false); }
void BM_OracleParallel(benchmark::State& state) {
  oracle(state, true);
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_ReplicatesSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicatesParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
