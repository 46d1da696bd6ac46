#include <benchmark/benchmark.h>

#include "dicke/bogoliubov.hpp"
#include "dicke/meanfield.hpp"

using namespace dicke;

static void BM_ExcitationSpectrum(benchmark::State& state) {
  const auto p = resonant(0.9, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(excitation_spectrum(p));
}
BENCHMARK(BM_ExcitationSpectrum);

static void BM_GroundStateEnergy(benchmark::State& state) {
  const auto p = resonant(0.9, 1.1, 100, 100);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_energy(p));
}
BENCHMARK(BM_GroundStateEnergy);

static void BM_SpectrumSurface(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<CouplingPoint> grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grid.emplace_back(1.5 * i / (n - 1), 1.5 * j / (n - 1));
  const auto p0 = resonant(0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_surface(grid, p0, 1));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SpectrumSurface)->Arg(11)->Arg(51);
