#include <benchmark/benchmark.h>

#include "carroll/cli/commands.hpp"
#include "carroll/coherence.hpp"
#include "carroll/dft.hpp"

using namespace carroll;

static void BM_KsSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dft::KsSystem s;
  s.grid = TemporalGrid(-10, 10, n);
  s.Phi_s = dft::KsSystem::sample(s.grid, [](double t) { return 0.5 * t * t; });
  s.U_s.assign(n, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(dft::ks_solve(s, 2).eps[0]);
}
BENCHMARK(BM_KsSolve)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_HbtSampler(benchmark::State& state) {
  const TemporalGrid g(-8, 8, 64);
  coherence::OrbitalSet o{g, {cli::hermite_orbital(g, 0), cli::hermite_orbital(g, 1)}, {1, 1},
                          coherence::Statistics::Fermi};
  const auto d = coherence::coherence_from_orbitals(o);
  const auto runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coherence::sample_arrivals(d, runs, 7).runs);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * runs));
}
BENCHMARK(BM_HbtSampler)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
