#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "carroll/errors.hpp"
#include "carroll/propagator.hpp"

using namespace carroll;
using namespace carroll::propagator;
using std::numbers::pi;

namespace {
Field gaussian(const TemporalGrid& g, double width, double centre) {
  Field f{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = g[j] - centre;
    f[j] = std::pow(2 * pi * width * width, -0.25) * std::exp(-s * s / (4 * width * width));
  }
  return f;
}

// Relative-error Richardson oracle values (independent tridiagonal solve).
constexpr double kQuartic0[5] = {0.265090524202, 0.949918256795, 1.863924485430, 2.911186376998, 4.065456504394};
constexpr double kQuartic1[5] = {0.284446461308, 0.678256972816, 1.445607430250, 2.333217048884, 3.346181155303};
}  // namespace

TEST(Propagator, FreeGaussianSpreading) {
  // Width grows as sigma^2 + (hbar x / (2 m c^3 sigma))^2.
  const PhysParams p;
  const TemporalGrid g(-20, 20, 512);
  const CsProblem prob{p, Grid(g), {}, {}};
  const auto f = propagate(prob, gaussian(g, 1.0, 0.0), 0.0, 3.0, 0.01);
  const double a = p.hbar * 3.0 / (2 * p.m * p.sigma);
  const double S2 = 1.0 + a * a;
  for (std::size_t j = 0; j < g.size(); j += 17)
    EXPECT_NEAR(std::norm(f[j]), std::exp(-g[j] * g[j] / (2 * S2)) / std::sqrt(2 * pi * S2), 1e-12);
}

TEST(Propagator, NormConservedAndReversible) {
  const PhysParams p;
  const TemporalGrid g(-12, 12, 256);
  const CsProblem prob{p, Grid(g), [](std::span<const double> t) { return 0.3 * t[0] * t[0]; }, {}};
  const auto f0 = gaussian(g, 1.0, 0.5);
  const auto f1 = propagate(prob, f0, 0.0, 1.0, 1e-2);
  EXPECT_NEAR(l2_norm(f1), l2_norm(f0), 1e-13);
  const auto back = propagate(prob, f1, 1.0, 0.0, 1e-2);
  double w = 0;
  for (std::size_t j = 0; j < g.size(); ++j) w = std::max(w, std::abs(back[j] - f0[j]));
  EXPECT_LT(w, 1e-12);
}

TEST(Propagator, LeakIsReported) {
  const PhysParams p;
  const TemporalGrid g(-6, 6, 128);
  const CsProblem prob{p, Grid(g), {}, {}};
  EXPECT_THROW(propagate(prob, gaussian(g, 1.0, 0.0), 0.0, 20.0, 0.05), BoundaryLeak);
}

TEST(Propagator, OscillatorModes) {
  const PhysParams p;
  const auto s = oscillator_spectrum(p, 2);
  EXPECT_NEAR(s.mode_frequencies[0], 1.0, 1e-14);
  EXPECT_NEAR(s.mode_frequencies[1], std::sqrt(2.0), 1e-14);
  const int occ[2] = {1, 2};
  EXPECT_NEAR(s.level(occ), 1.5 + 2.5 * std::sqrt(2.0), 1e-13);
  PhysParams bad = p;
  bad.omega_t = 0.0;
  bad.k_t = -1.0;
  EXPECT_THROW(oscillator_spectrum(bad, 3), UnstableModel);
}

TEST(Propagator, EigenstateKeepsDensity) {
  const PhysParams p;
  const auto s = oscillator_spectrum(p, 1);
  const Grid g(TemporalGrid(-10, 10, 128));
  const int occ[1] = {2};
  const auto f = oscillator_eigenstate(p, s, g, occ);
  const auto V = oscillator_potential(p, 1);
  const auto h = propagate(CsProblem{p, g, V.value, {}}, f, 0.0, 0.7, 2.5e-4);  // splitting error ~ dx^2
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::norm(h[j]), std::norm(f[j]), 1e-8);
}

TEST(Propagator, GaugeCheckSecondOrder) {
  const PhysParams p;
  const auto V = oscillator_potential(p, 1);
  GaugeCheckOptions a, b;
  a.dx = 2e-3;
  b.dx = 1e-3;
  const double ea = gauge_equivalence_check(p, V, 1.0, a), eb = gauge_equivalence_check(p, V, 1.0, b);
  EXPECT_LT(eb, 1e-4);
  EXPECT_NEAR(ea / eb, 4.0, 0.4);
}

TEST(Propagator, GaugeCheckTwoTimes) {
  const PhysParams p;
  GaugeCheckOptions o;
  o.n_times = 2;
  o.points = 64;
  o.half_width = 9;
  o.dx = 2e-3;
  EXPECT_LT(gauge_equivalence_check(p, oscillator_potential(p, 2), 0.5, o), 1e-4);
}

TEST(Quartic, MatchesOracleAndShooting) {
  const PhysParams p;
  for (double lambda : {0.0, 1.0}) {
    const QuarticEigenproblem qp{p, lambda, 0.5};
    const auto dense = quartic_eigensolve(qp, 5);
    const auto fd = quartic_eigensolve(qp, 5, Discretization::FiniteDifference);
    const auto shoot = quartic_shooting(qp, 5);
    const double* oracle = lambda == 0.0 ? kQuartic0 : kQuartic1;
    for (int k = 0; k < 5; ++k) {
      EXPECT_NEAR(dense.energies[k] / oracle[k], 1.0, 1e-7);
      EXPECT_NEAR(fd.energies[k] / oracle[k], 1.0, 1e-7);
      EXPECT_NEAR(shoot[k] / dense.energies[k], 1.0, 1e-9);
    }
  }
}

TEST(Quartic, CollectiveFactorIsPhase) {
  const PhysParams p;
  EXPECT_NEAR(std::abs(collective_factor(p, 0.7, 1.3)), 1.0, 1e-15);
  EXPECT_NEAR(std::arg(collective_factor(p, 0.0, 1.0)), 1.0 / 3.0, 1e-15);
}
