#include <gtest/gtest.h>

#include <cmath>

#include "carroll/duality.hpp"
#include "carroll/errors.hpp"

using namespace carroll;
using namespace carroll::duality;

namespace {
DualityInput free_input(double E) {
  DualityInput in;
  in.V_sch = [](double) { return 0.0; };
  in.E_sch = E;
  in.a = -3;
  in.b = 3;
  in.ic_point = 0;
  return in;
}

DualityInput harmonic_input(double omega, double E) {
  DualityInput in;
  in.V_sch = [omega](double x) { return 0.5 * omega * omega * x * x; };
  in.E_sch = E;
  in.a = -3;
  in.b = 3;
  in.ic_point = 0;
  return in;
}
}  // namespace

TEST(Schwarzian, MoebiusAndExponential) {
  EXPECT_NEAR(schwarzian(-1, 2, -6), 0.0, 1e-15);  // 1/x at x = 1
  EXPECT_NEAR(schwarzian(1, 1, 1), -0.5, 1e-15);   // exp
}

TEST(Duality, WronskianOfSineCosine) {
  const double k = std::sqrt(2 * 0.5);  // q = -2 m E / hbar^2 = -k^2
  auto in = free_input(0.5);
  in.ics = {0.0, k, 1.0, 0.0};  // y1 = sin(kx), y2 = cos(kx)
  const auto sys = solve_fundamental(in);
  for (std::size_t i = 0; i < sys.x.size(); i += 250) {
    EXPECT_NEAR(sys.wronskian(i), -k, 1e-10);
    EXPECT_NEAR(sys.y1[i], std::sin(k * sys.x[i]), 1e-10);
  }
}

TEST(Duality, FreeMapClosedForm) {
  const double E = 0.3, k = std::sqrt(2 * E);
  const auto map = build_map(free_input(E));
  const auto [lo, hi] = map.valid_interval();
  EXPECT_NEAR(hi, std::acos(0.0) / k, 5e-3);  // first zero of cos(kx)
  EXPECT_NEAR(lo, -hi, 1e-12);
  for (double x : {-1.5, -0.2, 0.0, 0.9, 1.8}) {
    EXPECT_NEAR(map.tau(x), std::atan(std::tan(k * x) / k), 1e-11);
    const double R = std::pow(std::sin(k * x) / k, 2) + std::pow(std::cos(k * x), 2);
    EXPECT_NEAR(map.dtau(x), 1.0 / R, 1e-10);
    EXPECT_NEAR(map.delta(map.tau(x)), x, 1e-12);
  }
}

TEST(Duality, HarmonicGroundStateIsGaussian) {
  const double w = 0.7;
  const auto sys = solve_fundamental(harmonic_input(w, 0.5 * w));
  for (std::size_t i = 0; i < sys.x.size(); i += 100)
    EXPECT_NEAR(sys.y2[i], std::exp(-0.5 * w * sys.x[i] * sys.x[i]), 1e-10);
}

TEST(Duality, ResidualsOnValidWindow) {
  for (const auto& in : {free_input(0.3), harmonic_input(0.7, 0.3)}) {
    const auto map = build_map(in);
    const auto [lo, hi] = map.valid_interval();
    std::vector<double> xs;
    for (int i = 0; i <= 50; ++i) xs.push_back(lo + (hi - lo) * (0.05 + 0.9 * i / 50.0));
    EXPECT_LT(verify_inverse_master(map, xs, 0.0025), 1e-5);
    EXPECT_LT(pure_schwarzian_residual(map, xs, 0.0025), 1e-5);
  }
}

TEST(Duality, ForwardRelationRecoversPotential) {
  const auto in = harmonic_input(0.7, 0.3);
  const auto map = build_map(in);
  for (double x : {-1.0, 0.2, 1.4}) {
    const double t = map.tau(x);
    const auto v = forward_potential(map, t);
    EXPECT_NEAR(v.real(), in.V_sch(x), 1e-6);
    EXPECT_NEAR(v.imag(), 0.0, 1e-6);
  }
  const double ts[1] = {map.tau(0.5)};
  EXPECT_NEAR(carroll_potential(map, ts)[0].real(), 0.0, 1e-15);
}

TEST(Duality, ErrorPaths) {
  const auto map = build_map(free_input(0.3));
  EXPECT_THROW(map.delta(map.tau_range().second + 1.0), SingularMap);
  auto in = free_input(0.3);
  in.ic_point = -3;
  in.ics = {1.0, 0.0, 0.0, 1.0};  // y2 = 0 at the anchor
  EXPECT_THROW(build_map(in), NoValidWindow);
  auto bad = free_input(0.3);
  bad.b = bad.a;
  EXPECT_THROW(solve_fundamental(bad), InvalidArgument);
}

TEST(Duality, CoupledOscillatorChannels) {
  const PhysParams p;
  const auto cm = coupled_oscillator_map(p);
  EXPECT_DOUBLE_EQ(cm.Omega_X(), p.omega);
  EXPECT_NEAR(cm.Omega_xi(), std::sqrt(p.omega * p.omega + 2 * p.k_c / p.m), 1e-15);
  const auto [x1, x2] = cm.mixed(0.0, 0.0);
  EXPECT_NEAR(x1, 0.0, 1e-12);
  EXPECT_NEAR(x2, 0.0, 1e-12);
  // Odd relative channel: swapping the times swaps the particles.
  const auto a = cm.mixed(0.3, 0.1), b = cm.mixed(0.1, 0.3);
  EXPECT_NEAR(a.first, b.second, 1e-10);
}
