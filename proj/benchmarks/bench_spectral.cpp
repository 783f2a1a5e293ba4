#include <benchmark/benchmark.h>

#include <numbers>

#include "carroll/dnls.hpp"
#include "carroll/propagator.hpp"
#include "carroll/spectral.hpp"

using namespace carroll;

static void BM_FftRoundTrip(benchmark::State& state) {
  const Grid g(TemporalGrid(-20, 20, static_cast<std::size_t>(state.range(0))));
  const Fft fft(g);
  std::vector<cplx> v(g.size(), cplx(1.0, 0.5));
  for (auto _ : state) {
    fft.forward(v);
    fft.backward(v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(2)->Range(256, 8192)->Complexity(benchmark::oNLogN);

static void BM_DnlsStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TemporalGrid g(-20 * std::numbers::pi, 20 * std::numbers::pi, n);
  auto psi = dnls::solitary_wave(g, 1, 1, -20, 0);
  const double h = g.dt() * g.dt() / 4;
  for (auto _ : state) {
    psi = dnls::dnls_step(psi, h);
    benchmark::DoNotOptimize(psi[0]);
  }
}
BENCHMARK(BM_DnlsStep)->Arg(512)->Arg(1024)->Arg(2048)->Arg(4096);

static void BM_PropagatorStep(benchmark::State& state) {
  const PhysParams p;
  const auto N = static_cast<int>(state.range(0));
  const auto V = propagator::oscillator_potential(p, N);
  const Grid grid = N == 1 ? Grid(TemporalGrid(-10, 10, 256))
                           : Grid(std::vector<TemporalGrid>{TemporalGrid(-8, 8, 64), TemporalGrid(-8, 8, 64)});
  const propagator::CsProblem prob{p, grid, V.value, {}};
  const auto s = propagator::oscillator_spectrum(p, N);
  std::vector<int> occ(static_cast<std::size_t>(N), 0);
  auto f = propagator::oscillator_eigenstate(p, s, grid, occ);
  double x = 0;
  for (auto _ : state) {
    f = propagator::step(prob, f, x, 1e-3);
    x += 1e-3;
  }
}
BENCHMARK(BM_PropagatorStep)->Arg(1)->Arg(2);
