#include "carroll/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "carroll/errors.hpp"
#include "carroll/spectral.hpp"

namespace carroll::kernels {

using std::numbers::pi;

CollectiveCoords from_cartesian(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("from_cartesian: need N >= 2");
  CollectiveCoords q;
  for (double v : x) q.U += v;
  const double xN = x.back();
  for (std::size_t a = 0; a + 1 < x.size(); ++a) q.r.push_back(x[a] - xN);
  return q;
}

std::vector<double> to_cartesian(const CollectiveCoords& q) {
  const auto N = static_cast<double>(q.N());
  double sr = 0.0;
  for (double v : q.r) sr += v;
  const double xN = (q.U - sr) / N;
  std::vector<double> x;
  for (double v : q.r) x.push_back(v + xN);
  x.push_back(xN);
  return x;
}

RelativeProfile gaussian_profile(double s_rel) {
  const double norm = std::pow(pi * s_rel * s_rel, -0.25);
  return [=](std::span<const double> r) {
    double v = 1.0;
    for (double ra : r) v *= norm * std::exp(-ra * ra / (2.0 * s_rel * s_rel));
    return cplx(v, 0.0);
  };
}

double chain_potential(const PhysParams& p, std::span<const double> x) {
  double u = 0.0;
  for (double v : x) u += 0.5 * p.m * p.omega * p.omega * v * v;
  for (std::size_t n = 0; n + 1 < x.size(); ++n) {
    const double d = x[n + 1] - x[n];
    u += 0.5 * p.k_c * d * d;
  }
  return u;
}

double c_of_r(const PhysParams& p, std::span<const double> r) {
  if (r.empty()) throw InvalidArgument("c_of_r: N must be >= 2");
  const auto N = static_cast<double>(r.size() + 1);
  double s2 = 0.0, s1 = 0.0;
  for (double v : r) {
    s2 += v * v;
    s1 += v;
  }
  double chain = r.back() * r.back();
  for (std::size_t n = 0; n + 1 < r.size(); ++n) {
    const double d = r[n + 1] - r[n];
    chain += d * d;
  }
  const double u_rel = 0.5 * p.m * p.omega * p.omega * (s2 - s1 * s1 / N) + 0.5 * p.k_c * chain;
  return u_rel / p.hbar;
}

GaussianSolution::GaussianSolution(PhysParams p, int N, RelativeProfile f)
    : p_(std::move(p)), N_(N), f_(std::move(f)) {
  p_.validate();
  if (N < 1) throw InvalidArgument("GaussianSolution: N >= 1");
  if (!f_) f_ = gaussian_profile(p_.s_rel);
}

double GaussianSolution::k_N() const { return N_ * p_.m * p_.omega * p_.omega; }

namespace {
struct Coeffs {
  double alpha, beta;
};
Coeffs coeffs(const PhysParams& p, double kN) {
  return {p.hbar / (2.0 * p.m * p.c * p.c * p.c), kN / p.hbar};
}
}  // namespace

double GaussianSolution::sigma_N(double U) const {
  const auto [a, b] = coeffs(p_, k_N());
  const double x = U / N_;
  const double s = p_.sigma;
  return std::sqrt(s * s + a * a * x * x / (s * s));
}

double GaussianSolution::t_c(double U) const {
  const auto [a, b] = coeffs(p_, k_N());
  const double x = U / N_;
  return -a * b * x * x * x / 3.0;
}

double GaussianSolution::chi(double U) const {
  const auto [a, b] = coeffs(p_, k_N());
  const double S = sigma_N(U);
  return a * (U / N_) / (4.0 * p_.sigma * p_.sigma * S * S);
}

double GaussianSolution::theta(double U) const {
  const auto [a, b] = coeffs(p_, k_N());
  const double x = U / N_;
  return -0.5 * b * x * x;
}

double GaussianSolution::gamma(double U) const {
  if (!global_phase_on_) return 0.0;
  const auto [a, b] = coeffs(p_, k_N());
  return -a * b * b * std::pow(U / N_, 5) / 20.0;
}

double GaussianSolution::global_phase(double U) const {
  const auto [a, b] = coeffs(p_, k_N());
  return gamma(U) - 0.5 * std::atan(a * (U / N_) / (p_.sigma * p_.sigma));
}

cplx GaussianSolution::field(double U, std::span<const double> r, double t) const {
  const double S = sigma_N(U);
  const double s = t - p_.t0;
  const double tau = s - t_c(U);
  const double amp = std::pow(2.0 * pi, -0.25) / std::sqrt(S) * std::exp(-tau * tau / (4.0 * S * S));
  const double ph = chi(U) * tau * tau + theta(U) * s + global_phase(U);
  const cplx fr = N_ >= 2 ? f_(r) : cplx(1.0);
  return fr * std::polar(amp, ph);
}

double GaussianSolution::density(double U, std::span<const double> r, double t) const {
  return std::norm(field(U, r, t));
}

double GaussianSolution::current(double U, std::span<const double> r, double t) const {
  const double tau = t - p_.t0 - t_c(U);
  const double dphase = 2.0 * chi(U) * tau + theta(U);
  const double c3 = p_.c * p_.c * p_.c;
  return p_.hbar / (p_.m * c3) * density(U, r, t) * dphase;
}

cplx GaussianSolution::psi(double U, std::span<const double> r, double t) const {
  double u_tot = p_.m * p_.omega * p_.omega * U * U / (2.0 * N_);
  if (N_ >= 2) u_tot += p_.hbar * c_of_r(p_, r);
  return std::polar(1.0, (t - p_.t0) * u_tot / p_.hbar) * field(U, r, t);
}

cplx GaussianSolution::boundary(std::span<const double> r, double t) const {
  const double s = t - p_.t0, sg = p_.sigma;
  const cplx fr = N_ >= 2 ? f_(r) : cplx(1.0);
  return fr * std::pow(2.0 * pi * sg * sg, -0.25) * std::exp(-s * s / (4.0 * sg * sg));
}

cplx GaussianSolution::kernel(double U, double t, double t_prime) const {
  if (U == 0.0) throw SingularKernel("kernel: U = 0 is singular, use field()");
  const double mc3 = p_.m * p_.c * p_.c * p_.c;
  const double a = mc3 * N_ / (2.0 * pi * p_.hbar * U);
  // sqrt(a / i): principal branch, continuous through the upper half plane.
  const cplx pref = std::sqrt(cplx(0.0, -a));
  const double d = t - t_prime - t_c(U);
  const double ph = mc3 * N_ * d * d / (2.0 * p_.hbar * U) + theta(U) * (t - p_.t0) + gamma(U);
  return pref * std::polar(1.0, ph);
}

cplx kernel_n(const PhysParams& p, int N, double U, std::span<const double> /*r*/, double t,
              double t_prime) {
  return GaussianSolution(p, N).kernel(U, t, t_prime);
}

cplx gaussian_field(const PhysParams& p, std::span<const double> x, double t) {
  const auto q = from_cartesian(x);
  return GaussianSolution(p, q.N()).field(q.U, q.r, t);
}

double density_n(const PhysParams& p, std::span<const double> x, double t) {
  return std::norm(gaussian_field(p, x, t));
}

double current_n(const PhysParams& p, std::span<const double> x, double t) {
  const auto q = from_cartesian(x);
  return GaussianSolution(p, q.N()).current(q.U, q.r, t);
}

namespace two_body {

namespace {
struct Parts {
  double Sigma2, tc, chi, theta, gamma, gouy;
};
// N = 2 substituted by hand: k_eff = 2 m omega^2, x = U/2.
Parts parts(const PhysParams& p, double U) {
  const double mc3 = p.m * p.c * p.c * p.c;
  const double keff = 2.0 * p.m * p.omega * p.omega;
  const double s2 = p.sigma * p.sigma;
  Parts q{};
  q.Sigma2 = s2 + p.hbar * p.hbar * U * U / (16.0 * s2 * mc3 * mc3);
  q.tc = -keff * U * U * U / (48.0 * mc3);
  q.chi = p.hbar * U / (16.0 * s2 * mc3 * q.Sigma2);
  q.theta = -keff * U * U / (8.0 * p.hbar);
  q.gamma = -keff * keff * std::pow(U, 5) / (1280.0 * p.hbar * mc3);
  q.gouy = -0.5 * std::atan(p.hbar * U / (4.0 * s2 * mc3));
  return q;
}
double f2(const PhysParams& p, double V) {
  return std::exp(-V * V / (p.s_rel * p.s_rel)) / (std::sqrt(pi) * p.s_rel);
}
}  // namespace

cplx kernel(const PhysParams& p, double U, double V, double t, double t_prime) {
  (void)V;
  if (U == 0.0) throw SingularKernel("two_body::kernel: U = 0");
  const double mc3 = p.m * p.c * p.c * p.c;
  const auto q = parts(p, U);
  const cplx pref = std::sqrt(mc3 / (pi * p.hbar * U) / cplx(0.0, 1.0));
  const double d = t - t_prime - q.tc;
  return pref * std::polar(1.0, mc3 * d * d / (p.hbar * U) + q.theta * (t - p.t0) + q.gamma);
}

cplx field(const PhysParams& p, double U, double V, double t) {
  const auto q = parts(p, U);
  const double s = t - p.t0, tau = s - q.tc;
  const double amp = std::sqrt(f2(p, V)) * std::pow(2.0 * pi * q.Sigma2, -0.25) *
                     std::exp(-tau * tau / (4.0 * q.Sigma2));
  return std::polar(amp, q.chi * tau * tau + q.theta * s + q.gamma + q.gouy);
}

double density(const PhysParams& p, double U, double V, double t) {
  const auto q = parts(p, U);
  const double tau = t - p.t0 - q.tc;
  return f2(p, V) * std::exp(-tau * tau / (2.0 * q.Sigma2)) / std::sqrt(2.0 * pi * q.Sigma2);
}

double current(const PhysParams& p, double U, double V, double t) {
  const auto q = parts(p, U);
  const double c3 = p.c * p.c * p.c, c6 = c3 * c3;
  const double tau = t - p.t0 - q.tc;
  const double drift = p.hbar * p.hbar * U * tau / (8.0 * p.m * p.m * c6 * p.sigma * p.sigma * q.Sigma2);
  return density(p, U, V, t) * (-p.omega * p.omega * U * U / (4.0 * c3) + drift);
}

}  // namespace two_body

double reduced_pde_residual(const GaussianSolution& sol, double U, std::span<const double> r,
                            const TemporalGrid& g) {
  const auto& p = sol.params();
  const double N = sol.N(), x = U / N, h = 1e-3;
  const auto n = g.size();
  Field phi{Grid(g)};
  std::vector<cplx> dU(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto f = [&](double u) { return sol.field(u, r, g[j]); };
    phi[j] = f(U);
    dU[j] = (-f(U + 2 * h) + 8.0 * f(U + h) - 8.0 * f(U - h) + f(U - 2 * h)) / (12.0 * h);
  }
  const Field tt = spectral_derivative(phi, 2);
  const double mc2 = p.m * p.c * p.c;
  double worst = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx lhs = cplx(0.0, p.hbar * p.c) * N * dU[j];
    const cplx rhs = -p.hbar * p.hbar / (2.0 * mc2) * tt[j] + p.c * (g[j] - p.t0) * sol.k_N() * x * phi[j];
    worst = std::max(worst, std::abs(lhs - rhs));
    ref = std::max(ref, std::abs(phi[j]));
  }
  return worst / ref;
}

Marginals one_body_marginals(const PhysParams& p, std::span<const double> x1, double t) {
  using boost::math::quadrature::gauss_kronrod;
  const GaussianSolution sol(p, 2);
  const double W = 10.0 * p.s_rel;
  Marginals m;
  for (double a : x1) {
    auto rho = [&](double x2) {
      const double r = a - x2;
      return sol.density(a + x2, std::span<const double>(&r, 1), t);
    };
    auto cur = [&](double x2) {
      const double r = a - x2;
      return sol.current(a + x2, std::span<const double>(&r, 1), t);
    };
    const double lo = a - W, hi = a + W;
    if (rho(lo) > 1e-10 || rho(hi) > 1e-10)
      throw BoundaryLeak("one_body_marginals: integrand not decayed at window edge");
    m.rho.push_back(gauss_kronrod<double, 31>::integrate(rho, lo, hi, 20, 1e-12));
    m.current.push_back(gauss_kronrod<double, 31>::integrate(cur, lo, hi, 20, 1e-12));
  }
  return m;
}

}  // namespace carroll::kernels
