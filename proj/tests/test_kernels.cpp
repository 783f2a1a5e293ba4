#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "carroll/errors.hpp"
#include "carroll/kernels.hpp"

using namespace carroll;
using namespace carroll::kernels;

namespace {
// mpmath evaluation of the derived closed form at the default parameters
// (checked there to satisfy the reduced equation with zero residual).
constexpr double kFieldN2Re = 0.4370220628991146;     // U=1, r=0.3, t=0.2
constexpr double kFieldN2Im = -0.063763310851111214;
constexpr double kDensityN2 = 0.19505404327129311;
constexpr double kCurrentN2 = -0.018836101237472913;
constexpr double kFieldN3Re = 0.31155981162567972;    // U=1.5, r=(0.2,-0.4), t=-0.3
constexpr double kFieldN3Im = -0.020212416112436562;
}  // namespace

TEST(Kernels, FrozenClosedFormValues) {
  const PhysParams p;
  const GaussianSolution s2(p, 2), s3(p, 3);
  const double r2[1] = {0.3}, r3[2] = {0.2, -0.4};
  const cplx f2 = s2.field(1.0, r2, 0.2), f3 = s3.field(1.5, r3, -0.3);
  EXPECT_NEAR(f2.real(), kFieldN2Re, 1e-14);
  EXPECT_NEAR(f2.imag(), kFieldN2Im, 1e-14);
  EXPECT_NEAR(s2.density(1.0, r2, 0.2), kDensityN2, 1e-14);
  EXPECT_NEAR(s2.current(1.0, r2, 0.2), kCurrentN2, 1e-14);
  EXPECT_NEAR(f3.real(), kFieldN3Re, 1e-14);
  EXPECT_NEAR(f3.imag(), kFieldN3Im, 1e-14);
}

TEST(Kernels, BoundaryLimits) {
  const PhysParams p;
  const GaussianSolution s(p, 4);
  EXPECT_EQ(s.sigma_N(0.0), p.sigma);
  EXPECT_EQ(s.t_c(0.0), 0.0);
  EXPECT_NEAR(GaussianSolution(p, 2).t_c(2.0), -0.16333333333333333, 1e-15);
  const double r[3] = {0.1, 0.2, -0.3};
  for (double t : {-1.0, 0.0, 0.7}) EXPECT_NEAR(std::abs(s.field(0.0, r, t) - s.boundary(r, t)), 0.0, 1e-15);
}

TEST(Kernels, CartesianRoundTrip) {
  const std::vector<double> x{0.3, -1.2, 2.5};
  const auto q = from_cartesian(x);
  EXPECT_NEAR(q.U, 1.6, 1e-15);
  const auto back = to_cartesian(q);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-14);
}

TEST(Kernels, DedicatedTwoBodyFormsAgree) {
  const PhysParams p;
  for (double x1 : {-1.0, 0.4})
    for (double x2 : {-0.5, 1.3})
      for (double t : {-0.7, 0.0, 1.1}) {
        const double x[2] = {x1, x2};
        const double U = x1 + x2, V = x1 - x2;
        EXPECT_NEAR(std::abs(gaussian_field(p, x, t) - two_body::field(p, U, V, t)), 0.0, 1e-14);
        EXPECT_NEAR(density_n(p, x, t), two_body::density(p, U, V, t), 1e-14);
        EXPECT_NEAR(current_n(p, x, t), two_body::current(p, U, V, t), 1e-14);
      }
}

TEST(Kernels, KernelPropagatesBoundaryData) {
  using boost::math::quadrature::gauss_kronrod;
  const PhysParams p;
  const GaussianSolution s(p, 2);
  const double r[1] = {0.0};
  for (double U : {0.5, 1.5}) {
    const double t = 0.4;
    auto re = [&](double tp) { return (s.kernel(U, t, tp) * s.boundary(r, tp)).real(); };
    auto im = [&](double tp) { return (s.kernel(U, t, tp) * s.boundary(r, tp)).imag(); };
    const cplx conv(gauss_kronrod<double, 61>::integrate(re, -12, 12, 25, 1e-13),
                    gauss_kronrod<double, 61>::integrate(im, -12, 12, 25, 1e-13));
    EXPECT_NEAR(std::abs(conv - s.field(U, r, t)), 0.0, 1e-9) << "U=" << U;
  }
  EXPECT_THROW(s.kernel(0.0, 0.0, 0.0), SingularKernel);
}

TEST(Kernels, ContinuityEquation) {
  // d rho/dx1 + d rho/dx2 + dJ/dt = 0
  const PhysParams p;
  const double h = 1e-4;
  for (double x1 : {-0.6, 0.9})
    for (double t : {-0.5, 0.3}) {
      const double x2 = 0.4;
      auto rho = [&](double a, double b, double tt) {
        const double x[2] = {a, b};
        return density_n(p, x, tt);
      };
      auto J = [&](double tt) {
        const double x[2] = {x1, x2};
        return current_n(p, x, tt);
      };
      const double d1 = (rho(x1 + h, x2, t) - rho(x1 - h, x2, t)) / (2 * h);
      const double d2 = (rho(x1, x2 + h, t) - rho(x1, x2 - h, t)) / (2 * h);
      const double dt = (J(t + h) - J(t - h)) / (2 * h);
      EXPECT_NEAR(d1 + d2 + dt, 0.0, 1e-8);
    }
}

TEST(Kernels, PdeResidualSmall) {
  const PhysParams p;
  const TemporalGrid g(-16, 16, 256);
  const GaussianSolution s(p, 2);
  const double r[1] = {0.3};
  EXPECT_LT(reduced_pde_residual(s, 1.0, r, g), 1e-10);
}

TEST(Kernels, MarginalIsNormalizedInTime) {
  // int rho_1 dt = int int rho dx2 dt = 1 at any x1, since each U-slice carries unit norm.
  using boost::math::quadrature::gauss_kronrod;
  const PhysParams p;
  const double x1 = 0.3;
  auto f = [&](double t) { return one_body_marginals(p, std::span<const double>(&x1, 1), t).rho[0]; };
  const double total = gauss_kronrod<double, 31>::integrate(f, -12, 12, 8, 1e-10);
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(Kernels, ChainRelativeEnergy) {
  PhysParams p;
  const double r[1] = {1.0};
  // U_rel for N = 2: m omega^2 r^2 / 4 + k_c r^2 / 2
  EXPECT_NEAR(c_of_r(p, r), (p.m * p.omega * p.omega / 4 + p.k_c / 2) / p.hbar, 1e-15);
}
