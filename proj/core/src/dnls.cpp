#include "carroll/dnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "carroll/diff.hpp"
#include "carroll/errors.hpp"
#include "carroll/spectral.hpp"
#include "fftw_util.hpp"

namespace carroll::dnls {

namespace {
constexpr cplx I{0.0, 1.0};

// dpsi/dX = i a psi_TT + b |psi|^2 psi_T - i c |psi|^4 psi
struct Coefficients {
  double a, b, c;
};

// Owns aligned FFTW buffers and plans; every transform runs on the same
// buffers, so SIMD codelets are safe and results are reproducible.
class Engine {
 public:
  Engine(const TemporalGrid& g, Coefficients k)
      : g_(g), k_(k), n_(g.size()), kodd_(wavenumbers(g, true)), buf_(n_) {
    const auto kk = wavenumbers(g, false);
    half_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) kk_.push_back(kk[j] * kk[j]);
    std::lock_guard lock(fftw_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    const int n = static_cast<int>(n_);
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw NumericError("dnls: plan creation failed");
  }
  ~Engine() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void set_half_step(double h) {
    if (h == h_) return;
    h_ = h;
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) half_[j] = s * std::polar(1.0, -k_.a * kk_[j] * 0.5 * h);
  }

  void step(std::vector<cplx>& psi, double h) {
    const double budget = g_.dt() * g_.dt() / 4.0;
    if (std::abs(k_.a * h) > budget * (1.0 + 1e-12))
      throw StepTooLarge("dnls_step: dX exceeds dT^2/4");
    set_half_step(h);
    linear(psi);
    nonlinear(psi, h);
    linear(psi);
  }

 private:
  void linear(std::vector<cplx>& u) {
    std::copy(u.begin(), u.end(), buf_.begin());
    exec(fwd_);
    for (std::size_t j = 0; j < n_; ++j) buf_[j] *= half_[j];
    exec(bwd_);
    std::copy(buf_.begin(), buf_.end(), u.begin());
  }

  // out = D in, through buf_.
  void derivative(const cplx* in, cplx* out) {
    std::copy(in, in + n_, buf_.begin());
    exec(fwd_);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) buf_[j] *= cplx(0.0, s * kodd_[j]);
    exec(bwd_);
    std::copy(buf_.begin(), buf_.end(), out);
  }

  // b [ (n D psi + D(n psi)) / 2 - (D n) psi / 2 ] - i c n^2 psi
  void rhs(const std::vector<cplx>& psi, std::vector<cplx>& out) {
    dpsi_.resize(n_);
    npsi_.resize(n_);
    dn_.resize(n_);
    n_re_.resize(n_);
    out.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      n_re_[j] = std::norm(psi[j]);
      npsi_[j] = n_re_[j] * psi[j];
      dn_[j] = n_re_[j];
    }
    derivative(psi.data(), dpsi_.data());
    derivative(npsi_.data(), npsi_.data());
    derivative(dn_.data(), dn_.data());
    for (std::size_t j = 0; j < n_; ++j) {
      const double n = n_re_[j];
      out[j] = k_.b * (0.5 * (n * dpsi_[j] + npsi_[j]) - 0.5 * dn_[j].real() * psi[j]) -
               I * (k_.c * n * n) * psi[j];
    }
  }

  // Implicit midpoint, which conserves sum |psi|^2 exactly for this form.
  void nonlinear(std::vector<cplx>& psi, double h) {
    f_.resize(n_);
    next_.resize(n_);
    mid_.resize(n_);
    rhs(psi, f_);
    double scale = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      next_[j] = psi[j] + h * f_[j];
      scale = std::max(scale, std::abs(psi[j]));
    }
    for (int it = 0; it < 100; ++it) {
      for (std::size_t j = 0; j < n_; ++j) mid_[j] = 0.5 * (psi[j] + next_[j]);
      rhs(mid_, f_);
      double change = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        const cplx v = psi[j] + h * f_[j];
        change = std::max(change, std::abs(v - next_[j]));
        next_[j] = v;
      }
      if (change <= 1e-15 * scale) {
        psi.swap(next_);
        return;
      }
    }
    throw NumericError("dnls: midpoint iteration did not converge");
  }

  void exec(fftw_plan p) {
    auto* d = reinterpret_cast<fftw_complex*>(buf_.data());
    fftw_execute_dft(p, d, d);
  }

  TemporalGrid g_;
  Coefficients k_;
  std::size_t n_;
  std::vector<double> kodd_, kk_;
  std::vector<cplx> half_;
  double h_ = std::numeric_limits<double>::quiet_NaN();
  AlignedBuffer buf_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
  std::vector<cplx> dpsi_, npsi_, dn_, f_, next_, mid_;
  std::vector<double> n_re_;
};

Coefficients dimensionless(bool time_reflect) { return {1.0, time_reflect ? -1.0 : 1.0, -kBeta}; }

const TemporalGrid& axis_of(const Field& f) {
  if (f.grid.rank() != 1) throw ShapeError("dnls: one-dimensional field expected");
  return f.grid.axis(0);
}
}  // namespace

Field mean_field_rhs(const MeanFieldProblem& p, double x, const Field& phi) {
  const auto& pp = p.params;
  const auto& g = axis_of(phi);
  const double mc2 = pp.m * pp.c * pp.c;
  const double gx = p.coupling(x);
  const SpectralDerivative D(phi.grid);
  std::vector<cplx> d1 = phi.values, d2 = phi.values;
  D.apply(d1, 1);
  D.apply(d2, 2);
  Field out(phi.grid);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g[j];
    double U = 0.0, dU = 0.0;
    if (p.U_ext) {
      U = p.U_ext(x, t);
      dU = central_diff4([&](double s) { return p.U_ext(x, s); }, t, 1e-4 * (1.0 + std::abs(t)));
    }
    const cplx f = phi[j];
    const double n = std::norm(f);
    out[j] = -pp.hbar * pp.hbar / (2.0 * mc2) * d2[j]            // kinetic
             + I * pp.hbar / (2.0 * mc2) * dU * f                 // (dU/dt) phi
             + I * pp.hbar / mc2 * U * d1[j]                      // U dphi/dt
             + 2.0 * I * pp.hbar * gx / (pp.m * pp.c) * n * d1[j]  // |phi|^2 dphi/dt
             + (U * U + 4.0 * pp.c * gx * U * n + 3.0 * pp.c * pp.c * gx * gx * n * n) / (2.0 * mc2) * f;
  }
  return out;
}

DnlsScales make_scales(const PhysParams& p, double tau_pulse) {
  p.validate();
  if (!(tau_pulse > 0) || !(p.g0 > 0)) throw InvalidArgument("make_scales: tau and g0 must be positive");
  DnlsScales s;
  s.tau_pulse = tau_pulse;
  s.L = 2.0 * p.m * p.c * p.c * p.c * tau_pulse * tau_pulse / p.hbar;
  s.A = std::sqrt(p.hbar / (4.0 * p.g0 * p.c * tau_pulse));
  return s;
}

Field to_dimensionless(const DnlsScales& s, const Field& phi) {
  const auto& g = axis_of(phi);
  Field psi(Grid(TemporalGrid(g.t_min() / s.tau_pulse, g.t_max() / s.tau_pulse, g.size())));
  for (std::size_t j = 0; j < g.size(); ++j) psi[j] = phi[j] / s.A;
  return psi;
}

Field to_physical(const DnlsScales& s, const Field& psi) {
  const auto& g = axis_of(psi);
  Field phi(Grid(TemporalGrid(g.t_min() * s.tau_pulse, g.t_max() * s.tau_pulse, g.size())));
  for (std::size_t j = 0; j < g.size(); ++j) phi[j] = psi[j] * s.A;
  return phi;
}

Field dnls_step(const Field& psi, double dX, bool time_reflect) {
  Field out = psi;
  Engine eng(axis_of(psi), dimensionless(time_reflect));
  eng.step(out.values, dX);
  return out;
}

Field reflect(const Field& psi) {
  const auto& g = axis_of(psi);
  if (std::abs(g.t_min() + g.t_max()) > 1e-12 * g.length())
    throw ShapeError("reflect: grid must be symmetric about T = 0");
  Field out(psi.grid);
  const auto n = g.size();
  for (std::size_t j = 0; j < n; ++j) out[(n - j) % n] = psi[j];
  return out;
}

Diagnostics diagnose(const Field& psi, double X) {
  const auto& g = axis_of(psi);
  const double dt = g.dt();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0, peak = -1.0, pos = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double n = std::norm(psi[j]), t = g[j];
    m0 += n * dt;
    m1 += n * t * dt;
    m2 += n * t * t * dt;
    m4 += n * n * dt;
    if (std::abs(psi[j]) > peak) {
      peak = std::abs(psi[j]);
      pos = t;
    }
  }
  const double mean = m1 / m0;
  return {X, std::sqrt(m0), peak, pos, std::sqrt(std::max(0.0, m2 / m0 - mean * mean)), m0 * m0 / m4};
}

EvolveResult evolve_dnls(const Field& psi0, double X_final, double dX, const Observer& obs,
                         std::size_t snapshot_every, bool time_reflect) {
  const auto& g = axis_of(psi0);
  if (!(X_final >= 0) || !(dX > 0)) throw InvalidArgument("evolve_dnls: need X_final >= 0, dX > 0");
  require_decay(psi0, 1e-10, "evolve_dnls initial data");
  Engine eng(g, dimensionless(time_reflect));
  const auto steps = static_cast<std::size_t>(std::ceil(X_final / dX - 1e-9));
  const double h = steps ? X_final / static_cast<double>(steps) : 0.0;
  EvolveResult r{psi0, {}};
  auto snap = [&](double X) {
    r.diagnostics.push_back(diagnose(r.psi, X));
    if (obs) obs(X, r.psi);
  };
  snap(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    eng.step(r.psi.values, h);
    if (s == steps || (snapshot_every && s % snapshot_every == 0)) snap(static_cast<double>(s) * h);
  }
  return r;
}

Field solitary_wave(const TemporalGrid& g, double a, double w, double T0, double X) {
  const double kappa = 2.0 / (a * a * w * w);
  const double Omega = kappa * kappa - 1.0 / (w * w);
  Field f{Grid(g)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = g[j] - T0;
    const double xi = (s - 2.0 * kappa * X) / w;
    const double ph = kappa * s - Omega * X + 0.25 * a * a * w * std::tanh(xi);
    f[j] = std::polar(a / std::cosh(xi), ph);
  }
  return f;
}

Field evolve_physical(const MeanFieldProblem& p, const Field& phi0, double x_final, double dx,
                      const PhysicalOptions& opt) {
  if (p.U_ext || p.g) throw InvalidArgument("evolve_physical: only U = 0 and constant g0");
  const auto& pp = p.params;
  const double mc2 = pp.m * pp.c * pp.c;
  // i hbar c phi_x = -(hbar^2/2mc^2) phi_tt + (2 i hbar g/mc) n phi_t + (3 g^2/2m) n^2 phi
  const Coefficients k{pp.hbar / (2.0 * mc2 * pp.c), 2.0 * pp.g0 / mc2,
                       opt.quintic_scale * 3.0 * pp.g0 * pp.g0 / (2.0 * pp.m * pp.hbar * pp.c)};
  Engine eng(axis_of(phi0), k);
  const auto steps = static_cast<std::size_t>(std::ceil(x_final / dx - 1e-9));
  const double h = x_final / static_cast<double>(steps);
  Field phi = phi0;
  for (std::size_t s = 0; s < steps; ++s) eng.step(phi.values, h);
  return phi;
}

double reduction_discrepancy(const PhysParams& p, double tau_pulse, const TemporalGrid& Tg,
                             double X_final, double dX, const PhysicalOptions& opt) {
  const auto s = make_scales(p, tau_pulse);
  const double T0 = 0.5 * (Tg.t_min() + Tg.t_max()) - 1.0;
  const Field psi0 = solitary_wave(Tg, 1.0, 1.0, T0, 0.0);
  const auto direct = evolve_dnls(psi0, X_final, dX).psi;

  MeanFieldProblem mp;
  mp.params = p;
  mp.grid = TemporalGrid(Tg.t_min() * tau_pulse, Tg.t_max() * tau_pulse, Tg.size());
  const Field phi = evolve_physical(mp, to_physical(s, psi0), s.L * X_final, s.L * dX, opt);
  const Field mapped = to_dimensionless(s, phi);

  double worst = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < Tg.size(); ++j) {
    worst = std::max(worst, std::abs(mapped[j] - direct[j]));
    ref = std::max(ref, std::abs(direct[j]));
  }
  return worst / ref;
}

}  // namespace carroll::dnls
