#include "carroll/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carroll/errors.hpp"

namespace carroll::propagator {

namespace {
constexpr cplx I{0.0, 1.0};

std::vector<double> flat_coords(const Grid& g) {
  std::vector<double> c(g.size() * g.rank());
  for (std::size_t k = 0; k < g.size(); ++k) g.coords(k, std::span<double>(c.data() + k * g.rank(), g.rank()));
  return c;
}

std::vector<double> k_squared(const Grid& g) {
  std::vector<std::vector<double>> ks;
  for (const auto& a : g.axes()) ks.push_back(wavenumbers(a, false));
  std::vector<double> k2(g.size(), 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    std::size_t rem = idx;
    for (std::size_t a = g.rank(); a-- > 0;) {
      const auto n = g.axis(a).size();
      const double k = ks[a][rem % n];
      k2[idx] += k * k;
      rem /= n;
    }
  }
  return k2;
}
}  // namespace

Propagator::Propagator(CsProblem problem)
    : problem_(std::move(problem)), fft_(problem_.grid) {
  problem_.params.validate();
  const auto& g = problem_.grid;
  k2_ = k_squared(g);
  coords_ = flat_coords(g);
  v_.assign(g.size(), 0.0);
  if (problem_.V_t) {
    for (std::size_t k = 0; k < g.size(); ++k)
      v_[k] = problem_.V_t(std::span<const double>(coords_.data() + k * g.rank(), g.rank()));
  }
}

void Propagator::step(Field& f, double x, double dx) const {
  const auto& p = problem_.params;
  const auto& g = problem_.grid;
  if (!(f.grid == g)) throw ShapeError("Propagator::step: field grid differs from problem grid");
  const double hc = p.hbar * p.c;
  const double xm = x + 0.5 * dx;
  const std::size_t r = g.rank();

  std::vector<cplx> half(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    double v = v_[k];
    if (problem_.drive) v += problem_.drive(xm, std::span<const double>(coords_.data() + k * r, r));
    half[k] = std::polar(1.0, -0.5 * dx * v / hc);
  }
  auto& u = f.values;
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= half[k];
  fft_.forward(u);
  const double kin = dx * p.hbar / (2.0 * p.m * p.c * p.c * p.c);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= std::polar(1.0, -kin * k2_[k]);
  fft_.backward(u);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= half[k];

  if (problem_.leak_tolerance >= 0) require_decay(f, problem_.leak_tolerance, "propagator step");
}

Field Propagator::propagate(Field f, double x0, double x1, double dx, const Observer& obs) const {
  if (x1 == x0) return f;
  if (dx == 0.0) throw InvalidArgument("propagate: dx must be nonzero");
  const double span = x1 - x0;
  const auto n = static_cast<long>(std::ceil(std::abs(span) / std::abs(dx) - 1e-9));
  const double h = span / static_cast<double>(n);
  if (obs) obs(x0, f);
  for (long i = 0; i < n; ++i) {
    const double x = x0 + static_cast<double>(i) * h;
    step(f, x, h);
    if (obs) obs(x + h, f);
  }
  return f;
}

Field step(const CsProblem& problem, const Field& f, double x, double dx) {
  Field out = f;
  Propagator(problem).step(out, x, dx);
  return out;
}

Field propagate(const CsProblem& problem, Field f, double x0, double x1, double dx,
                const Observer& obs) {
  return Propagator(problem).propagate(std::move(f), x0, x1, dx, obs);
}

TemporalPotential oscillator_potential(const PhysParams& p, int N) {
  const double mw2 = p.m * p.omega_t * p.omega_t, kt = p.k_t;
  TemporalPotential V;
  V.value = [=](std::span<const double> t) {
    double v = 0.0;
    for (double ti : t) v += 0.5 * mw2 * ti * ti;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j) v += 0.5 * kt * (t[i] - t[j]) * (t[i] - t[j]);
    return v;
  };
  V.gradient = [=](std::span<const double> t) {
    double sum = 0.0;
    for (double ti : t) sum += ti;
    const auto n = static_cast<double>(t.size());
    std::vector<double> g(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) g[i] = (mw2 + n * kt) * t[i] - kt * sum;
    return g;
  };
  (void)N;
  return V;
}

namespace {

// One implicit-midpoint substep of dpsi/dx = -(i/(hbar c)) B psi, with
// B psi = [i hbar sum_i (A_i D_i psi + D_i(A_i psi)) + sum_i A_i^2 psi] / (2 m c^2).
class CrossStep {
 public:
  CrossStep(const PhysParams& p, const Grid& g, const std::vector<std::vector<double>>& dV)
      : p_(p), g_(g), d_(g), dV_(dV) {}

  void apply_B(const std::vector<cplx>& psi, double x, std::vector<cplx>& out) const {
    const double inv2m = 1.0 / (2.0 * p_.m * p_.c * p_.c);
    const double s = x / p_.c;
    out.assign(psi.size(), 0.0);
    std::vector<cplx> a(psi.size()), b(psi.size());
    for (std::size_t ax = 0; ax < g_.rank(); ++ax) {
      const auto& dv = dV_[ax];
      a = psi;
      d_.apply(a, 1, ax);
      for (std::size_t k = 0; k < psi.size(); ++k) b[k] = s * dv[k] * psi[k];
      d_.apply(b, 1, ax);
      for (std::size_t k = 0; k < psi.size(); ++k) {
        const double A = s * dv[k];
        out[k] += inv2m * (I * p_.hbar * (A * a[k] + b[k]) + A * A * psi[k]);
      }
    }
  }

  void substep(std::vector<cplx>& psi, double x_eval, double h) const {
    const cplx coef = -I * h / (p_.hbar * p_.c);
    std::vector<cplx> next = psi, mid(psi.size()), Bm;
    double scale = 0.0;
    for (const auto& z : psi) scale = std::max(scale, std::abs(z));
    for (int it = 0; it < 500; ++it) {
      for (std::size_t k = 0; k < psi.size(); ++k) mid[k] = 0.5 * (psi[k] + next[k]);
      apply_B(mid, x_eval, Bm);
      double change = 0.0;
      for (std::size_t k = 0; k < psi.size(); ++k) {
        const cplx v = psi[k] + coef * Bm[k];
        change = std::max(change, std::abs(v - next[k]));
        next[k] = v;
      }
      if (change <= 1e-15 * scale) {
        psi.swap(next);
        return;
      }
    }
    throw NumericError("gauge_equivalence_check: midpoint iteration did not converge; reduce dx");
  }

 private:
  const PhysParams& p_;
  const Grid& g_;
  SpectralDerivative d_;
  const std::vector<std::vector<double>>& dV_;
};

}  // namespace

double gauge_equivalence_check(const PhysParams& p, const TemporalPotential& V, double x_final,
                               const GaugeCheckOptions& opt) {
  p.validate();
  const TemporalGrid axis(-opt.half_width, opt.half_width, opt.points);
  const Grid g(std::vector<TemporalGrid>(static_cast<std::size_t>(opt.n_times), axis));
  const auto r = g.rank();
  const auto coords = flat_coords(g);
  auto at = [&](std::size_t k) { return std::span<const double>(coords.data() + k * r, r); };

  Field phi0(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (opt.initial) {
      phi0[k] = opt.initial(at(k));
    } else {
      cplx v = 1.0;
      for (double t : at(k)) {
        const double s = t - p.t0 - 0.5;
        v *= std::pow(2.0 * std::numbers::pi * p.sigma * p.sigma, -0.25) *
             std::exp(-s * s / (4.0 * p.sigma * p.sigma));
      }
      phi0[k] = v;
    }
  }
  if (x_final == 0.0) return 0.0;

  // Gradient of V_t on the grid, analytic when available.
  std::vector<std::vector<double>> dV(r, std::vector<double>(g.size()));
  std::vector<double> vv(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    vv[k] = V.value(at(k));
    std::vector<double> grad;
    if (V.gradient) {
      grad = V.gradient(at(k));
    } else {
      std::vector<double> y(at(k).begin(), at(k).end());
      grad.resize(r);
      for (std::size_t a = 0; a < r; ++a) {
        const double y0 = y[a], h = 1e-4 * (1.0 + std::abs(y0));
        auto f = [&](double d) {
          y[a] = y0 + d;
          return V.value(y);
        };
        grad[a] = (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
        y[a] = y0;
      }
    }
    for (std::size_t a = 0; a < r; ++a) dV[a][k] = grad[a];
  }

  CsProblem outside{p, g, V.value, {}, -1.0};
  const Field phi = Propagator(outside).propagate(phi0, 0.0, x_final, opt.dx);

  // Inside form: half cross/potential substep, exact kinetic, half substep.
  const auto n = static_cast<long>(std::ceil(std::abs(x_final) / opt.dx - 1e-9));
  const double h = x_final / static_cast<double>(n);
  Fft fft(g);
  const auto k2 = k_squared(g);
  CrossStep cross(p, g, dV);
  std::vector<cplx> psi = phi0.values;
  const double kin = h * p.hbar / (2.0 * p.m * p.c * p.c * p.c);
  for (long i = 0; i < n; ++i) {
    const double xm = (static_cast<double>(i) + 0.5) * h;
    cross.substep(psi, xm, 0.5 * h);
    fft.forward(psi);
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= std::polar(1.0, -kin * k2[k]);
    fft.backward(psi);
    cross.substep(psi, xm, 0.5 * h);
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx rel = std::polar(1.0, x_final / p.c * vv[k] / p.hbar) * phi[k];
    worst = std::max(worst, std::abs(psi[k] - rel));
  }
  return worst;
}

}  // namespace carroll::propagator
