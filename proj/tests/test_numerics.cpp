#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "carroll/diff.hpp"
#include "carroll/errors.hpp"
#include "carroll/grid.hpp"
#include "carroll/spectral.hpp"

using namespace carroll;
using std::numbers::pi;

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(TemporalGrid(0, 1, 12), InvalidArgument);
  EXPECT_THROW(TemporalGrid(0, 1, 8), InvalidArgument);
  EXPECT_THROW(TemporalGrid(1, 0, 16), InvalidArgument);
  EXPECT_NO_THROW(TemporalGrid(0, 1, 16));
}

TEST(Grid, RowMajorLastAxisFastest) {
  const Grid g({TemporalGrid(0, 1, 16), TemporalGrid(-1, 1, 32)});
  EXPECT_EQ(g.size(), 512u);
  EXPECT_EQ(g.stride(0), 32u);
  EXPECT_EQ(g.stride(1), 1u);
  double c[2];
  g.coords(33, c);
  EXPECT_DOUBLE_EQ(c[0], 1.0 / 16);
  EXPECT_DOUBLE_EQ(c[1], -1.0 + 2.0 / 32);
}

TEST(Grid, NormRejectsNonFinite) {
  Field f{Grid(TemporalGrid(0, 1, 16))};
  f[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(l2_norm(f), NumericError);
}

TEST(Grid, DecayCheck) {
  const TemporalGrid g(-10, 10, 64);
  Field f{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-g[j] * g[j]);
  EXPECT_NO_THROW(require_decay(f, 1e-10));
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.01 * g[j] * g[j]);
  EXPECT_THROW(require_decay(f, 1e-10), BoundaryLeak);
}

TEST(Spectral, SineDerivativesExact) {
  const TemporalGrid g(0, 2 * pi, 64);
  Field f{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::sin(3 * g[j]);
  const auto d1 = spectral_derivative(f, 1);
  const auto d2 = spectral_derivative(f, 2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(d1[j].real(), 3 * std::cos(3 * g[j]), 1e-12);
    EXPECT_NEAR(d2[j].real(), -9 * std::sin(3 * g[j]), 1e-11);
  }
  EXPECT_THROW(spectral_derivative(f, 3), UnsupportedOrder);
}

TEST(Spectral, NyquistModeHasNoOddDerivative) {
  const TemporalGrid g(0, 1, 16);
  const auto k = wavenumbers(g, true);
  EXPECT_EQ(k[8], 0.0);
  EXPECT_GT(wavenumbers(g, false)[8], 0.0);
}

TEST(Spectral, SecondAxisOfTwoDimensionalField) {
  const Grid g({TemporalGrid(0, 2 * pi, 16), TemporalGrid(0, 2 * pi, 32)});
  Field f(g);
  double c[2];
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coords(k, c);
    f[k] = std::cos(c[0]) * std::sin(2 * c[1]);
  }
  const auto d = spectral_derivative(f, 1, 1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.coords(k, c);
    EXPECT_NEAR(d[k].real(), 2 * std::cos(c[0]) * std::cos(2 * c[1]), 1e-12);
  }
}

TEST(Diff, FiniteDiffCheck) {
  const TemporalGrid g(0, 1, 256);
  std::vector<double> f, df, wrong;
  for (std::size_t j = 0; j < g.size(); ++j) {
    f.push_back(g[j] * g[j]);
    df.push_back(2 * g[j]);
    wrong.push_back(3 * g[j]);
  }
  EXPECT_TRUE(finite_diff_check(g, f, df, 1e-10));
  EXPECT_FALSE(finite_diff_check(g, f, wrong, 1e-3));
  std::vector<double> shorter(f.begin(), f.end() - 1);
  EXPECT_THROW(finite_diff_check(g, shorter, df, 1e-3), ShapeError);
}

TEST(Diff, SixthOrderStencils) {
  const double h = 0.01;
  std::vector<double> y;
  for (int i = -4; i <= 4; ++i) y.push_back(std::sin(0.3 + i * h));
  EXPECT_NEAR(fd1_6(y, 4, h), std::cos(0.3), 1e-12);
  EXPECT_NEAR(fd2_6(y, 4, h), -std::sin(0.3), 1e-9);
  EXPECT_NEAR(fd3_6(y, 4, h), -std::cos(0.3), 1e-6);
  EXPECT_NEAR(central_diff4([](double x) { return std::exp(x); }, 0.5, 1e-3), std::exp(0.5), 1e-11);
}
