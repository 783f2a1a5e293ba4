#include "carroll/dft.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "carroll/spectral.hpp"

namespace carroll::dft {

namespace {
constexpr std::size_t kMaxDense = 4096;

double occupancy(const KsSystem& s) {
  return std::accumulate(s.occupations.begin(), s.occupations.end(), 0.0);
}

double integral(const std::vector<double>& v, double dt) {
  return std::accumulate(v.begin(), v.end(), 0.0) * dt;
}
}  // namespace

std::vector<double> KsSystem::sample(const TemporalGrid& g, const std::function<double(double)>& fn) {
  std::vector<double> out(g.size(), 0.0);
  if (fn)
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = fn(g[j]);
  return out;
}

void KsSystem::validate() const {
  params.validate();
  const auto n = grid.size();
  if (Phi_s.size() != n || U_s.size() != n) throw ShapeError("KsSystem: fields must match the grid");
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(Phi_s[j]) || !std::isfinite(U_s[j]))
      throw SpectrumError("KsSystem: non-finite effective field");
  for (double f : occupations)
    if (!(f >= 0)) throw InvalidArgument("KsSystem: occupations must be non-negative");
}

KsSolution ks_solve(const KsSystem& sys, std::size_t n_states) {
  sys.validate();
  const auto n = sys.grid.size();
  if (n > kMaxDense) throw TooLarge("ks_solve: dense diagonalization capped at 4096 points");
  if (n_states == 0 || n_states > n) throw InvalidArgument("ks_solve: bad n_states");
  const auto& p = sys.params;
  const double hbar = p.hbar, mc2 = p.m * p.c * p.c;

  // Columns of the spectral P = -i hbar d/dt and P^2 matrices.
  const Fft fft{Grid(sys.grid)};
  const auto k_odd = wavenumbers(sys.grid, true);
  const auto k_all = wavenumbers(sys.grid, false);
  Eigen::MatrixXcd P(n, n), P2(n, n);
  std::vector<cplx> a(n), b(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::fill(a.begin(), a.end(), cplx{});
    a[col] = 1.0;
    fft.forward(a);
    for (std::size_t k = 0; k < n; ++k) {
      b[k] = a[k] * (hbar * hbar * k_all[k] * k_all[k]);
      a[k] *= hbar * k_odd[k];
    }
    fft.backward(a);
    fft.backward(b);
    for (std::size_t r = 0; r < n; ++r) {
      P(r, col) = a[r];
      P2(r, col) = b[r];
    }
  }
  const Eigen::VectorXd U = Eigen::Map<const Eigen::VectorXd>(sys.U_s.data(), n);
  const Eigen::VectorXd Phi = Eigen::Map<const Eigen::VectorXd>(sys.Phi_s.data(), n);
  Eigen::MatrixXcd H = P2 - P * U.asDiagonal() - U.asDiagonal() * P;
  H.diagonal() += (U.array() * U.array()).matrix().cast<cplx>();
  H /= 2.0 * mc2;
  H.diagonal() += Phi.cast<cplx>();
  H = 0.5 * (H + H.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw SpectrumError("ks_solve: diagonalization failed");

  KsSolution out;
  const double dt = sys.grid.dt();
  for (std::size_t s = 0; s < n_states; ++s) {
    const double e = es.eigenvalues()(static_cast<Eigen::Index>(s));
    if (!std::isfinite(e)) throw SpectrumError("ks_solve: non-finite eigenvalue");
    auto v = es.eigenvectors().col(static_cast<Eigen::Index>(s));
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const cplx phase = std::abs(v(big)) > 0 ? std::conj(v(big)) / std::abs(v(big)) : cplx{1.0};
    Field f{Grid(sys.grid)};
    for (std::size_t j = 0; j < n; ++j) f[j] = v(static_cast<Eigen::Index>(j)) * phase / std::sqrt(dt);
    out.eps.push_back(e);
    out.orbitals.push_back(std::move(f));
  }
  for (std::size_t a1 = 0; a1 < n_states; ++a1)
    for (std::size_t b1 = 0; b1 <= a1; ++b1) {
      const cplx ov = inner(out.orbitals[a1], out.orbitals[b1]);
      if (std::abs(ov - (a1 == b1 ? 1.0 : 0.0)) > 1e-10)
        throw OrthonormalityError("ks_solve: orbitals not orthonormal");
    }
  return out;
}

DensityPair densities_from_orbitals(const KsSystem& sys, const std::vector<Field>& orbitals) {
  const auto n = sys.grid.size();
  if (sys.U_s.size() != n) throw ShapeError("densities_from_orbitals: U_s size");
  const auto& p = sys.params;
  const double mc2 = p.m * p.c * p.c;
  const SpectralDerivative D{Grid(sys.grid)};
  DensityPair d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < orbitals.size(); ++k) {
    const double f = k < sys.occupations.size() ? sys.occupations[k] : 0.0;
    if (f == 0.0) continue;
    const auto& phi = orbitals[k].values;
    if (phi.size() != n) throw ShapeError("densities_from_orbitals: orbital size");
    std::vector<cplx> dphi = phi;
    D.apply(dphi, 1);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx Pphi = cplx(0.0, -p.hbar) * dphi[j] - sys.U_s[j] * phi[j];
      d.n[j] += f * std::norm(phi[j]);
      d.j_t[j] += f * (std::conj(phi[j]) * Pphi).real() / mc2;
    }
  }
  return d;
}

ScfResult scf_loop(const KsSystem& sys, const Functional& functional, double mix, double tol,
                   int max_iter) {
  if (!(mix > 0 && mix <= 1)) throw InvalidArgument("scf_loop: mix must lie in (0, 1]");
  if (!(tol > 0) || max_iter < 1) throw InvalidArgument("scf_loop: bad tol or max_iter");
  const auto states = sys.occupations.size();
  const double total = occupancy(sys), dt = sys.grid.dt();

  ScfResult r{sys, ks_solve(sys, states), {}, {}};
  DensityPair in = densities_from_orbitals(sys, r.solution.orbitals);
  for (int it = 0; it < max_iter; ++it) {
    auto fields = functional(in);
    r.system.Phi_s = std::move(fields.Phi_s);
    r.system.U_s = std::move(fields.U_s);
    r.solution = ks_solve(r.system, states);
    r.densities = densities_from_orbitals(r.system, r.solution.orbitals);
    if (std::abs(integral(r.densities.n, dt) - total) > 1e-8 * std::max(1.0, total))
      throw NumericError("scf_loop: density lost normalization");
    double change = 0.0;
    for (std::size_t j = 0; j < in.n.size(); ++j)
      change = std::max({change, std::abs(r.densities.n[j] - in.n[j]),
                         std::abs(r.densities.j_t[j] - in.j_t[j])});
    r.history.push_back(change);
    if (change < tol) return r;
    for (std::size_t j = 0; j < in.n.size(); ++j) {
      in.n[j] += mix * (r.densities.n[j] - in.n[j]);
      in.j_t[j] += mix * (r.densities.j_t[j] - in.j_t[j]);
    }
  }
  throw NotConverged("scf_loop: no convergence within max_iter", r.history);
}

Functional external_functional(std::vector<double> Phi_ext, std::vector<double> U_ext) {
  return [Phi_ext = std::move(Phi_ext), U_ext = std::move(U_ext)](const DensityPair&) {
    return EffectiveFields{Phi_ext, U_ext};
  };
}

Functional hartree_functional(std::vector<double> Phi_ext, double g_H) {
  return [Phi_ext = std::move(Phi_ext), g_H](const DensityPair& d) {
    EffectiveFields f{Phi_ext, std::vector<double>(Phi_ext.size(), 0.0)};
    for (std::size_t j = 0; j < f.Phi_s.size(); ++j) f.Phi_s[j] += g_H * d.n[j];
    return f;
  };
}

}  // namespace carroll::dft
