#pragma once

#include <functional>
#include <span>
#include <vector>

#include "carroll/grid.hpp"
#include "carroll/params.hpp"

namespace carroll::kernels {

// U = sum x_j, r_a = x_a - x_N (a < N).
struct CollectiveCoords {
  double U = 0.0;
  std::vector<double> r;
  int N() const { return static_cast<int>(r.size()) + 1; }
};

CollectiveCoords from_cartesian(std::span<const double> x);
std::vector<double> to_cartesian(const CollectiveCoords& q);

using RelativeProfile = std::function<cplx(std::span<const double> r)>;

// prod_a (pi s^2)^(-1/4) exp(-r_a^2 / (2 s^2)); unit L2 norm per coordinate.
RelativeProfile gaussian_profile(double s_rel);

// Chain potential: on-site m omega^2/2 plus nearest-neighbour k_c/2.
double chain_potential(const PhysParams& p, std::span<const double> x);

// C(r) = U_rel(r) / hbar for the oscillator chain, N = r.size() + 1 >= 2.
double c_of_r(const PhysParams& p, std::span<const double> r);

// Closed-form Gaussian solution of the reduced equation
//   i hbar c dPhi/dx = -(hbar^2/2mc^2) d^2Phi/dt^2 + c (t - t0) k_N x Phi,  x = U/N,
// with boundary data Phi(U=0) = f(r) (2 pi sigma^2)^(-1/4) exp(-(t-t0)^2/(4 sigma^2)).
class GaussianSolution {
 public:
  GaussianSolution(PhysParams p, int N, RelativeProfile f = {});

  const PhysParams& params() const { return p_; }
  int N() const { return N_; }

  double k_N() const;
  double sigma_N(double U) const;
  double t_c(double U) const;
  double chi(double U) const;
  // Coefficient of the phase linear in (t - t0).
  double theta(double U) const;
  // Phase constant in t generated by the drive (zero if disabled).
  double gamma(double U) const;
  // gamma(U) plus the -atan/2 part of the complex width.
  double global_phase(double U) const;

  // Drop the t-independent phase (densities and currents do not see it).
  void set_include_global_phase(bool on) { global_phase_on_ = on; }

  cplx field(double U, std::span<const double> r, double t) const;
  double density(double U, std::span<const double> r, double t) const;
  // Gauge-invariant current (hbar/mc^3) Im(Phi* dPhi/dt), which satisfies
  // sum_j d rho/dx_j + dJ/dt = 0.
  double current(double U, std::span<const double> r, double t) const;
  // Original field Psi = exp(i (t - t0) U_tot / hbar) Phi.
  cplx psi(double U, std::span<const double> r, double t) const;

  // Boundary data at U = 0.
  cplx boundary(std::span<const double> r, double t) const;

  // Propagator from U = 0; throws SingularKernel at U = 0.
  cplx kernel(double U, double t, double t_prime) const;

 private:
  PhysParams p_;
  int N_;
  RelativeProfile f_;
  bool global_phase_on_ = true;
};

// max_t |i hbar c dPhi/dx + (hbar^2/2mc^2) Phi_tt - c (t - t0) k_N x Phi| / max |Phi| at U,
// with Phi_tt spectral on g and d/dx by fourth-order differences in U.
double reduced_pde_residual(const GaussianSolution& sol, double U, std::span<const double> r,
                            const TemporalGrid& g);

cplx kernel_n(const PhysParams& p, int N, double U, std::span<const double> r, double t,
              double t_prime);

cplx gaussian_field(const PhysParams& p, std::span<const double> x, double t);
double density_n(const PhysParams& p, std::span<const double> x, double t);
double current_n(const PhysParams& p, std::span<const double> x, double t);

// Dedicated N = 2 expressions in (U, V), written out independently.
namespace two_body {
cplx kernel(const PhysParams& p, double U, double V, double t, double t_prime);
cplx field(const PhysParams& p, double U, double V, double t);
double density(const PhysParams& p, double U, double V, double t);
double current(const PhysParams& p, double U, double V, double t);
}  // namespace two_body

struct Marginals {
  std::vector<double> rho;
  std::vector<double> current;
};

// rho_1(x1,t) = int rho dx2 and J_1 likewise, by adaptive Gauss-Kronrod.
// Throws BoundaryLeak if the integrand has not decayed at the window edge.
Marginals one_body_marginals(const PhysParams& p, std::span<const double> x1, double t);

}  // namespace carroll::kernels
