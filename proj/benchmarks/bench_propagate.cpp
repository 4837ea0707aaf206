#include <benchmark/benchmark.h>

#include "propgate/generators.hpp"
#include "propgate/par_engine.hpp"
#include "propgate/propcore.hpp"
#include "propgate/seq_engine.hpp"

namespace {

using namespace propgate;

ProblemInstance random_instance(int rows, int cols, std::uint64_t seed) {
  RandomInstanceOptions options;
  options.num_rows = rows;
  options.num_cols = cols;
  options.seed = seed;
  return gen_random(options);
}

void BM_SequentialCascade(benchmark::State& state) {
  const ProblemInstance inst = gen_cascade(static_cast<int>(state.range(0)));
  const EngineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_sequential(inst, cfg));
  }
}
BENCHMARK(BM_SequentialCascade)->Arg(10)->Arg(50);

void BM_ParallelCascade(benchmark::State& state) {
  const ProblemInstance inst = gen_cascade(static_cast<int>(state.range(0)));
  const EngineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_parallel(inst, cfg));
  }
}
BENCHMARK(BM_ParallelCascade)->Arg(10)->Arg(50);

void BM_SequentialRandom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemInstance inst = random_instance(n, n, 7);
  const EngineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_sequential(inst, cfg));
  }
  state.SetItemsProcessed(state.iterations() * inst.matrix.nnz());
}
BENCHMARK(BM_SequentialRandom)->Arg(200)->Arg(1000);

void BM_ParallelRandom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemInstance inst = random_instance(n, n, 7);
  EngineConfig cfg;
  cfg.worker_count = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_parallel(inst, cfg));
  }
  state.SetItemsProcessed(state.iterations() * inst.matrix.nnz());
}
BENCHMARK(BM_ParallelRandom)
    ->Args({200, 1})
    ->Args({200, 2})
    ->Args({1000, 1})
    ->Args({1000, 2});

void BM_Partition(benchmark::State& state) {
  const ProblemInstance inst =
      random_instance(static_cast<int>(state.range(0)), 2000, 13);
  const EngineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition_row_blocks(inst.matrix, cfg));
  }
}
BENCHMARK(BM_Partition)->Arg(2000);

void BM_RowActivities(benchmark::State& state) {
  const ProblemInstance inst =
      random_instance(static_cast<int>(state.range(0)), 2000, 17);
  for (auto _ : state) {
    for (int row = 0; row < inst.num_rows(); ++row) {
      benchmark::DoNotOptimize(compute_row_activities<double>(
          inst.matrix.row_cols(row), inst.matrix.row_values(row),
          inst.bounds.lower, inst.bounds.upper));
    }
  }
  state.SetItemsProcessed(state.iterations() * inst.matrix.nnz());
}
BENCHMARK(BM_RowActivities)->Arg(2000);

}  // namespace
