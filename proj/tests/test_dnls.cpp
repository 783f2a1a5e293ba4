#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "carroll/dnls.hpp"
#include "carroll/errors.hpp"
#include "carroll/spectral.hpp"

using namespace carroll;
using namespace carroll::dnls;
using std::numbers::pi;

TEST(Dnls, QuinticCoefficientIsFixed) {
  static_assert(kBeta == -3.0 / 16.0);
  EXPECT_EQ(DnlsScales::beta, -0.1875);
}

TEST(Dnls, ScalesFromParameters) {
  PhysParams p;
  p.m = 2.0;
  p.c = 1.5;
  p.hbar = 0.5;
  p.g0 = 0.25;
  const auto s = make_scales(p, 0.4);
  EXPECT_NEAR(s.L, 2 * 2.0 * 3.375 * 0.16 / 0.5, 1e-14);
  EXPECT_NEAR(s.A, std::sqrt(0.5 / (4 * 0.25 * 1.5 * 0.4)), 1e-15);
  p.g0 = 0.0;
  EXPECT_THROW(make_scales(p, 0.4), InvalidArgument);
}

TEST(Dnls, SolitaryWaveIsExact) {
  const TemporalGrid g(-20 * pi, 20 * pi, 1024);
  const auto r = evolve_dnls(solitary_wave(g, 1, 1, -10, 0), 2.0, g.dt() * g.dt() / 4);
  const auto exact = solitary_wave(g, 1, 1, -10, 2.0);
  double w = 0;
  for (std::size_t j = 0; j < g.size(); ++j) w = std::max(w, std::abs(r.psi[j] - exact[j]));
  EXPECT_LT(w, 1e-4);
  EXPECT_NEAR(r.diagnostics.back().peak_position, -10 + 2 * 2 * 2.0, g.dt());
}

TEST(Dnls, NormConserved) {
  const TemporalGrid g(-20 * pi, 20 * pi, 512);
  // A plain sech is not stationary here; it still keeps its norm.
  Field f{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = 1.2 / std::cosh(g[j]);
  const auto r = evolve_dnls(f, 1.0, g.dt() * g.dt() / 4, {}, 10);
  for (const auto& d : r.diagnostics) EXPECT_NEAR(d.norm / r.diagnostics[0].norm, 1.0, 1e-12);
}

TEST(Dnls, StepTooLarge) {
  const TemporalGrid g(-20, 20, 256);
  const auto f = solitary_wave(g, 1, 1, 0, 0);
  EXPECT_THROW(dnls_step(f, 1.01 * g.dt() * g.dt() / 4), StepTooLarge);
  EXPECT_NO_THROW(dnls_step(f, g.dt() * g.dt() / 4));
}

TEST(Dnls, TimeReflection) {
  const TemporalGrid g(-20 * pi, 20 * pi, 512);
  const auto f = solitary_wave(g, 1, 1, -5, 0);
  const double h = g.dt() * g.dt() / 4;
  const auto a = dnls_step(reflect(f), h, true);
  const auto b = reflect(dnls_step(f, h, false));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-14);
  // Without the sign flip the reflected evolution differs.
  const auto c = dnls_step(reflect(f), h, false);
  double w = 0;
  for (std::size_t j = 0; j < g.size(); ++j) w = std::max(w, std::abs(c[j] - b[j]));
  EXPECT_GT(w, 1e-6);
}

TEST(Dnls, MeanFieldRhsMatchesCovariantForm) {
  // (1/2mc^2)[D^2 phi - 2 c g phi Re(phi^* D phi)], D = -i hbar d/dt - A, A = U + c g |phi|^2
  MeanFieldProblem mp;
  mp.params.m = 1.3;
  mp.params.c = 0.8;
  mp.params.hbar = 0.9;
  mp.params.g0 = 0.4;
  mp.U_ext = [](double x, double t) { return 0.2 * x + 0.3 * std::sin(t); };
  const TemporalGrid g(-pi * 8, pi * 8, 512);  // wide enough that the wrap is smooth
  Field phi{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) phi[j] = std::polar(0.8 / std::cosh(g[j]), 0.5 * g[j]);
  const double x = 0.7;
  const auto& p = mp.params;
  const double cg = p.c * p.g0, mc2 = p.m * p.c * p.c;
  std::vector<double> A(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) A[j] = mp.U_ext(x, g[j]) + cg * std::norm(phi[j]);
  auto D = [&](const Field& f) {
    Field d = spectral_derivative(f, 1);
    for (std::size_t j = 0; j < g.size(); ++j) d[j] = cplx(0, -p.hbar) * d[j] - A[j] * f[j];
    return d;
  };
  const auto Dphi = D(phi), DDphi = D(Dphi);
  const auto rhs = mean_field_rhs(mp, x, phi);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx oracle = (DDphi[j] - 2 * cg * phi[j] * (std::conj(phi[j]) * Dphi[j]).real()) / (2 * mc2);
    EXPECT_NEAR(std::abs(rhs[j] - oracle), 0.0, 1e-8);
  }
}

TEST(Dnls, RoundTripAndReduction) {
  PhysParams p;
  p.m = 1.3;
  p.c = 0.8;
  p.hbar = 0.9;
  p.g0 = 0.6;
  const auto s = make_scales(p, 0.7);
  const TemporalGrid g(-10, 10, 128);
  const auto psi = solitary_wave(g, 1, 1, 0, 0);
  const auto back = to_dimensionless(s, to_physical(s, psi));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(back[j] - psi[j]), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(to_physical(s, psi).grid.axis(0).t_max(), 7.0);

  const TemporalGrid gd(-10 * pi, 10 * pi, 512);
  const double h = gd.dt() * gd.dt() / 4;
  EXPECT_LT(reduction_discrepancy(p, 0.7, gd, 0.3, h), 1e-6);
  PhysicalOptions wrong;
  wrong.quintic_scale = 1.01;
  EXPECT_GT(reduction_discrepancy(p, 0.7, gd, 0.3, h, wrong), 1e-6);
}

TEST(Dnls, Diagnostics) {
  const TemporalGrid g(-20, 20, 512);
  const auto f = solitary_wave(g, 2, 0.5, 3, 0);
  const auto d = diagnose(f, 0.0);
  EXPECT_NEAR(d.norm * d.norm, 2 * 4 * 0.5, 1e-10);  // int a^2 sech^2(t/w) = 2 a^2 w
  EXPECT_NEAR(d.peak_amplitude, 2.0, 1e-2);  // grid-sampled maximum
  EXPECT_NEAR(d.peak_position, 3.0, g.dt());
  EXPECT_NEAR(d.participation_ratio, 3 * 0.5, 1e-8);  // (2w)^2 / (4w/3)
}
