#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

#include "carroll/errors.hpp"
#include "carroll/propagator.hpp"

namespace carroll::propagator {

double QuarticEigenproblem::potential(double tau) const {
  const double d = lambda - 0.5 * k_t * tau * tau;
  return d * d / (4.0 * params.m * params.c * params.c);
}

QuarticSpectrum quartic_eigensolve(const QuarticEigenproblem& qp, int n_states, Discretization d) {
  const auto& g = qp.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  if (n > 4096) throw TooLarge("quartic_eigensolve: dense solve capped at 4096 points");
  if (n_states < 1 || n_states > n) throw InvalidArgument("quartic_eigensolve: bad n_states");
  const double kin = qp.params.hbar * qp.params.hbar / (qp.params.m * qp.params.c * qp.params.c);
  const double h = g.dt();

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  if (d == Discretization::Spectral) {
    // Circulant second-derivative matrix: first column is IFFT(-k^2).
    std::vector<cplx> col(g.size(), 0.0);
    const auto k = wavenumbers(g, false);
    for (std::size_t j = 0; j < g.size(); ++j) col[j] = -k[j] * k[j];
    Fft(Grid(g)).backward(col);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) H(i, j) = -kin * col[static_cast<std::size_t>((i - j + n) % n)].real();
    H = 0.5 * (H + H.transpose()).eval();
  } else {
    // Sixth-order central stencil, Dirichlet outside the grid.
    const std::array<double, 4> c{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index o = -3; o <= 3; ++o) {
        const Eigen::Index j = i + o;
        if (j >= 0 && j < n) H(i, j) = -kin * c[static_cast<std::size_t>(std::abs(o))] / (h * h);
      }
  }
  for (Eigen::Index i = 0; i < n; ++i) H(i, i) += qp.potential(g[static_cast<std::size_t>(i)]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericError("quartic_eigensolve: eigensolver failed");

  QuarticSpectrum out;
  for (int s = 0; s < n_states; ++s) {
    out.energies.push_back(es.eigenvalues()(s));
    Eigen::VectorXd v = es.eigenvectors().col(s) / std::sqrt(h);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    std::vector<double> st(v.data(), v.data() + n);
    Field probe(Grid(g), std::vector<cplx>(st.begin(), st.end()));
    require_decay(probe, 1e-10, "quartic_eigensolve");
    out.states.push_back(std::move(st));
  }
  return out;
}

namespace {

struct ShotResult {
  int zeros;
  double end_value;
};

// Integrates phi'' = (m c^2 / hbar^2)(W - E) phi from t_min with phi = 0,
// phi' = 1, counting sign changes on a fine observation mesh.
ShotResult shoot(const QuarticEigenproblem& qp, double E) {
  using namespace boost::numeric::odeint;
  using state = std::array<double, 2>;
  const double a = qp.params.m * qp.params.c * qp.params.c / (qp.params.hbar * qp.params.hbar);
  auto rhs = [&](const state& y, state& dy, double t) {
    dy[0] = y[1];
    dy[1] = a * (qp.potential(t) - E) * y[0];
  };
  state y{0.0, 1.0};
  const double t0 = qp.grid.t_min(), t1 = qp.grid.t_max();
  const int steps = 8 * static_cast<int>(qp.grid.size());
  const double dt = (t1 - t0) / steps;
  int zeros = 0;
  double prev = 0.0;
  auto stepper = make_controlled(1e-13, 1e-13, runge_kutta_fehlberg78<state>());
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    integrate_adaptive(stepper, rhs, y, t, t + dt, dt);
    t = t0 + (i + 1) * dt;
    if (prev != 0.0 && y[0] != 0.0 && (prev < 0) != (y[0] < 0)) ++zeros;
    if (y[0] != 0.0) prev = y[0];
  }
  return {zeros, y[0]};
}

}  // namespace

std::vector<double> quartic_shooting(const QuarticEigenproblem& qp, int n_states) {
  std::vector<double> out;
  double lo_floor = 0.0;
  for (int k = 0; k < n_states; ++k) {
    // Sturm: the left solution has more than k zeros iff E > E_k.
    double lo = lo_floor, hi = std::max(1.0, 2.0 * lo_floor + 1.0);
    while (shoot(qp, hi).zeros <= k) hi *= 2.0;
    for (int it = 0; it < 60 && hi - lo > 1e-6 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (shoot(qp, mid).zeros > k ? hi : lo) = mid;
    }
    // Refine on the endpoint value, which changes sign across E_k.
    auto f = [&](double E) { return shoot(qp, E).end_value; };
    const double flo = f(lo), fhi = f(hi);
    double root = 0.5 * (lo + hi);
    if ((flo < 0) != (fhi < 0)) {
      boost::uintmax_t iters = 100;
      auto tol = [](double x0, double x1) { return std::abs(x1 - x0) < 1e-14 * (1.0 + std::abs(x0)); };
      const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
      root = 0.5 * (br.first + br.second);
    }
    out.push_back(root);
    lo_floor = root;
  }
  return out;
}

cplx collective_factor(const PhysParams& p, double lambda, double T) {
  const double ph = (p.m * p.omega_t * p.omega_t * T * T * T / 3.0 + lambda * T) / p.hbar;
  return std::polar(1.0, ph);
}

}  // namespace carroll::propagator
