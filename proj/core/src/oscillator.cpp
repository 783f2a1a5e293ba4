#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "carroll/errors.hpp"
#include "carroll/propagator.hpp"

namespace carroll::propagator {

double OscillatorSpectrum::wavenumber(std::size_t mode, int n) const {
  return hbar * (mode_frequencies.at(mode) / c) * (n + 0.5);
}

double OscillatorSpectrum::level(std::span<const int> occupation) const {
  double e = 0.0;
  for (std::size_t a = 0; a < occupation.size(); ++a) e += wavenumber(a, occupation[a]);
  return e;
}

OscillatorSpectrum oscillator_spectrum(const PhysParams& p, int N) {
  p.validate();
  if (N < 1) throw InvalidArgument("oscillator_spectrum: N >= 1");
  const Eigen::Index n = N;
  Eigen::MatrixXd K = (p.m * p.omega_t * p.omega_t + N * p.k_t) * Eigen::MatrixXd::Identity(n, n) -
                      p.k_t * Eigen::MatrixXd::Ones(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  if (es.info() != Eigen::Success) throw NumericError("oscillator_spectrum: eigensolver failed");
  OscillatorSpectrum s;
  s.hbar = p.hbar;
  s.c = p.c;
  s.mode_vectors = es.eigenvectors();
  for (Eigen::Index a = 0; a < n; ++a) {
    const double ev = es.eigenvalues()(a);
    if (ev < -1e-12 * K.norm()) throw UnstableModel("oscillator_spectrum: indefinite quadratic form");
    s.mode_frequencies.push_back(std::sqrt(std::max(ev, 0.0) / p.m));
    // Deterministic sign: largest component positive.
    Eigen::Index imax = 0;
    s.mode_vectors.col(a).cwiseAbs().maxCoeff(&imax);
    if (s.mode_vectors(imax, a) < 0) s.mode_vectors.col(a) *= -1.0;
  }
  return s;
}

namespace {
// Normalized Hermite function h_n(y) by the stable three-term recurrence.
double hermite_function(int n, double y) {
  double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * y * h0;
  for (int k = 2; k <= n; ++k) {
    const double h2 = std::sqrt(2.0 / k) * y * h1 - std::sqrt((k - 1.0) / k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}
}  // namespace

Field oscillator_eigenstate(const PhysParams& p, const OscillatorSpectrum& s, const Grid& grid,
                            std::span<const int> occupation) {
  const auto r = grid.rank();
  if (static_cast<std::size_t>(s.mode_vectors.rows()) != r || occupation.size() != r)
    throw ShapeError("oscillator_eigenstate: rank mismatch");
  Field f(grid);
  std::vector<double> t(r);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.coords(k, t);
    double v = 1.0;
    for (std::size_t a = 0; a < r; ++a) {
      double tau = 0.0;
      for (std::size_t i = 0; i < r; ++i) tau += s.mode_vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) * t[i];
      const double beta = p.m * p.c * s.mode_frequencies[a] / p.hbar;
      v *= std::pow(beta, 0.25) * hermite_function(occupation[a], std::sqrt(beta) * tau);
    }
    f[k] = v;
  }
  return f;
}

}  // namespace carroll::propagator
