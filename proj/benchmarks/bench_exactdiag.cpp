#include <benchmark/benchmark.h>

#include "dicke/exactdiag.hpp"

using namespace dicke;

static void BM_BuildHamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = resonant(1.0, 1.0, n, n);
  const BasisSpec basis{n, n, 80};
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(p, basis));
  state.counters["dim"] = static_cast<double>(basis.dim());
}
BENCHMARK(BM_BuildHamiltonian)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Diagonalize(benchmark::State& state) {
  const auto path = static_cast<SolverPath>(state.range(0));
  const auto p = resonant(0.25, 0.25, 4, 4);
  const auto h = build_hamiltonian(p, {4, 4, 39});  // dim 1000
  DiagonalizeOptions opts;
  opts.path = path;
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h, 8, opts));
}
BENCHMARK(BM_Diagonalize)
    ->Arg(static_cast<int>(SolverPath::Dense))
    ->Arg(static_cast<int>(SolverPath::Iterative))
    ->Unit(benchmark::kMillisecond);

static void BM_DiagonalizeByParity(benchmark::State& state) {
  const auto p = resonant(0.25, 0.25, 4, 4);
  const auto h = build_hamiltonian(p, {4, 4, 39});
  DiagonalizeOptions opts;
  opts.path = SolverPath::Dense;
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize_by_parity(h, 8, opts));
}
BENCHMARK(BM_DiagonalizeByParity)->Unit(benchmark::kMillisecond);
