// Serial leaf-sum reference against the level-sweep kernels, single-threaded
// and with every available thread.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mhls/lab/checks.hpp"
#include "mhls/martingale.hpp"
#include "mhls/operators.hpp"
#include "mhls/reference.hpp"

namespace {

using namespace mhls;

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

SimpleFunction input(int depth) {
  auto tree = build_tree(tree_spec::Uniform{2, depth});
  return lab::random_function(tree, depth, 42);
}

void BM_Reference(benchmark::State& state) {
  const auto f = input(static_cast<int>(state.range(0)));
  const auto kind = static_cast<OperatorKind>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply(kind, f, 0.5));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

void kernel_run(benchmark::State& state, int threads) {
  const auto f = input(static_cast<int>(state.range(0)));
  const auto kind = static_cast<OperatorKind>(state.range(1));
  const int saved = max_threads();
  set_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(apply(kind, f, 0.5));
  set_threads(saved);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
  state.counters["threads"] = threads;
}

void BM_KernelSerial(benchmark::State& state) { kernel_run(state, 1); }
void BM_KernelParallel(benchmark::State& state) { kernel_run(state, max_threads()); }

void BM_Condition(benchmark::State& state) {
  const auto f = input(static_cast<int>(state.range(0)));
  set_threads(state.range(1) ? max_threads() : 1);
  for (auto _ : state) benchmark::DoNotOptimize(condition(f, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}

void operator_args(benchmark::internal::Benchmark* b) {
  for (int depth : {10, 14, 18}) {
    for (int kind = 0; kind < 4; ++kind) b->Args({depth, kind});
  }
}

}  // namespace

BENCHMARK(BM_Reference)->Apply(operator_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelSerial)->Apply(operator_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelParallel)->Apply(operator_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Condition)->ArgsProduct({{14, 18, 20}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
