// Serial reference against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "bwedge/bwm.hpp"
#include "bwedge/montecarlo.hpp"

using namespace bwedge;

namespace {

BwmProblem problem(long n) {
  return make_bwm_problem(DistributionSpec(Exponential{1.0}), BinomialParams(n, 0.3), 4);
}

void BM_MixtureGrid(benchmark::State& state, PerK mode, Execution exec) {
  const auto prob = problem(state.range(0));
  const auto grid = GridSpec{-8.0, 8.0, 0.05}.points();
  for (auto _ : state) benchmark::DoNotOptimize(mixture_cdf_grid(prob, grid, mode, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_SampleZ(benchmark::State& state, Execution exec) {
  const SimConfig cfg{problem(200), state.range(0), 1, 8};
  for (auto _ : state) benchmark::DoNotOptimize(sample_z(cfg, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_MixtureGrid, oracle_serial, PerK::OracleExact, Execution::Serial)->Arg(200)->Arg(1600);
BENCHMARK_CAPTURE(BM_MixtureGrid, oracle_parallel, PerK::OracleExact, Execution::Parallel)->Arg(200)->Arg(1600);
BENCHMARK_CAPTURE(BM_MixtureGrid, edgeworth_serial, PerK::Edgeworth, Execution::Serial)->Arg(200)->Arg(1600);
BENCHMARK_CAPTURE(BM_MixtureGrid, edgeworth_parallel, PerK::Edgeworth, Execution::Parallel)->Arg(200)->Arg(1600);
BENCHMARK_CAPTURE(BM_SampleZ, serial, Execution::Serial)->Arg(100000);
BENCHMARK_CAPTURE(BM_SampleZ, parallel, Execution::Parallel)->Arg(100000);

BENCHMARK_MAIN();
