#include "carroll/forces.hpp"

#include <cmath>
#include <random>

#include "carroll/errors.hpp"

namespace carroll::forces {

namespace {
double checked(const SpatialPotential& p, std::span<const double> x) {
  const double v = p.evaluate(x);
  if (std::isnan(v)) throw NumericError("SpatialPotential: evaluate returned NaN");
  return v;
}
}  // namespace

double collective_force_numeric(const SpatialPotential& p, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double x0 = y[j];
    const double h = 1e-5 * (1.0 + std::abs(x0));
    auto at = [&](double d) {
      y[j] = x0 + d;
      return checked(p, y);
    };
    total += (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    y[j] = x0;
  }
  return total;
}

double collective_force(const SpatialPotential& p, std::span<const double> x) {
  if (!p.analytic_grad) return collective_force_numeric(p, x);
  double total = 0.0;
  for (double g : (*p.analytic_grad)(x)) {
    if (std::isnan(g)) throw NumericError("collective_force: NaN gradient");
    total += g;
  }
  return total;
}

SpatialPotential coulomb_potential(std::vector<double> q, double eps) {
  if (!(eps > 0)) throw InvalidArgument("coulomb_potential: softening must be > 0");
  SpatialPotential p;
  p.N = static_cast<int>(q.size());
  p.evaluate = [q, eps](std::span<const double> x) {
    double u = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = j + 1; k < x.size(); ++k) {
        const double d = x[j] - x[k];
        u -= q[j] * q[k] / std::sqrt(d * d + eps * eps);
      }
    return u;
  };
  // Each pair contributes +F to x_j and exactly -F to x_k.
  p.analytic_grad = [q, eps](std::span<const double> x) {
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = j + 1; k < x.size(); ++k) {
        const double d = x[j] - x[k];
        const double r2 = d * d + eps * eps;
        const double f = q[j] * q[k] * d / (r2 * std::sqrt(r2));
        g[j] += f;
        g[k] -= f;
      }
    return g;
  };
  return p;
}

SpatialPotential oscillator_chain(const PhysParams& pp, int N) {
  const double mw2 = pp.m * pp.omega * pp.omega, kc = pp.k_c;
  SpatialPotential p;
  p.N = N;
  p.evaluate = [=](std::span<const double> x) {
    double u = 0.0;
    for (double v : x) u += 0.5 * mw2 * v * v;
    for (std::size_t n = 0; n + 1 < x.size(); ++n) u += 0.5 * kc * (x[n + 1] - x[n]) * (x[n + 1] - x[n]);
    return u;
  };
  p.analytic_grad = [=](std::span<const double> x) {
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) g[j] = mw2 * x[j];
    for (std::size_t n = 0; n + 1 < x.size(); ++n) {
      const double f = kc * (x[n + 1] - x[n]);
      g[n + 1] += f;
      g[n] -= f;
    }
    return g;
  };
  return p;
}

SpatialPotential linear_combination(double a, const SpatialPotential& p, double b,
                                    const SpatialPotential& q) {
  if (p.N != q.N) throw ShapeError("linear_combination: particle counts differ");
  SpatialPotential r;
  r.N = p.N;
  r.evaluate = [=](std::span<const double> x) { return a * p.evaluate(x) + b * q.evaluate(x); };
  if (p.analytic_grad && q.analytic_grad) {
    r.analytic_grad = [=](std::span<const double> x) {
      auto g = (*p.analytic_grad)(x);
      const auto h = (*q.analytic_grad)(x);
      for (std::size_t j = 0; j < g.size(); ++j) g[j] = a * g[j] + b * h[j];
      return g;
    };
  }
  return r;
}

bool is_translation_invariant(const SpatialPotential& p, int samples, std::uint64_t seed,
                              double box) {
  if (samples < 1) throw InvalidArgument("is_translation_invariant: samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<double> x(static_cast<std::size_t>(p.N)), y(x.size());
  for (int s = 0; s < samples; ++s) {
    for (auto& v : x) v = u(rng);
    const double shift = u(rng);
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + shift;
    if (!(std::abs(p.evaluate(y) - p.evaluate(x)) < 1e-9)) return false;
  }
  return true;
}

}  // namespace carroll::forces
