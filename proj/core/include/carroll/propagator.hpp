#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "carroll/grid.hpp"
#include "carroll/params.hpp"
#include "carroll/spectral.hpp"

namespace carroll::propagator {

using TimeFunction = std::function<double(std::span<const double>)>;
using Drive = std::function<double(double x, std::span<const double> t)>;

// i hbar c dPhi/dx = [sum_i E_i^2 / (2 m c^2) + V_t(t) + drive(x, t)] Phi
struct CsProblem {
  PhysParams params;
  Grid grid;
  TimeFunction V_t;  // empty means zero
  Drive drive;       // empty means zero
  // Edge amplitude allowed after each step; negative disables the check.
  double leak_tolerance = 1e-10;

  int N_times() const { return static_cast<int>(grid.rank()); }
};

using Observer = std::function<void(double x, const Field&)>;

// Strang splitting: half potential, full kinetic, half potential. The
// potential (including the drive at the step midpoint) enters as a phase.
class Propagator {
 public:
  explicit Propagator(CsProblem problem);

  const CsProblem& problem() const { return problem_; }
  void step(Field& f, double x, double dx) const;
  // Uniform steps of size close to |dx|; x1 < x0 propagates backwards.
  Field propagate(Field f, double x0, double x1, double dx, const Observer& obs = {}) const;

 private:
  CsProblem problem_;
  Fft fft_;
  std::vector<double> k2_;      // sum_i k_i^2 per grid point
  std::vector<double> v_;       // V_t sampled
  std::vector<double> coords_;  // flattened grid coordinates, rank per point
};

Field step(const CsProblem& problem, const Field& f, double x, double dx);
Field propagate(const CsProblem& problem, Field f, double x0, double x1, double dx,
                const Observer& obs = {});

// Temporal potential with optional analytic gradient.
struct TemporalPotential {
  TimeFunction value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

// sum_i m omega_t^2 t_i^2 / 2 + k_t/2 sum_{i<j} (t_i - t_j)^2
TemporalPotential oscillator_potential(const PhysParams& p, int N);

struct OscillatorSpectrum {
  std::vector<double> mode_frequencies;  // ascending
  Eigen::MatrixXd mode_vectors;          // columns are modes
  double hbar = 1.0;
  double c = 1.0;

  // hbar (omega_a / c) (n + 1/2)
  double wavenumber(std::size_t mode, int n) const;
  double level(std::span<const int> occupation) const;
};

// Diagonalizes m omega_t^2 I + k_t (N I - J). Throws UnstableModel if the
// quadratic form is not positive semidefinite.
OscillatorSpectrum oscillator_spectrum(const PhysParams& p, int N);

// Product of Hermite functions in the normal coordinates, sampled on grid.
Field oscillator_eigenstate(const PhysParams& p, const OscillatorSpectrum& s, const Grid& grid,
                            std::span<const int> occupation);

struct GaugeCheckOptions {
  int n_times = 1;
  double half_width = 12.0;
  std::size_t points = 256;
  double dx = 1e-3;
  // Initial data; defaults to a unit-norm Gaussian of width sigma offset by 0.5.
  std::function<cplx(std::span<const double>)> initial;
};

// Propagates the same data through the outside form (potential V_t) and the
// inside form with A_i = (x/c) dV_t/dt_i, and returns
// max |Psi_in - exp(i S / hbar) Phi_out| at x_final with S = (x/c) V_t.
double gauge_equivalence_check(const PhysParams& p, const TemporalPotential& V, double x_final,
                               const GaugeCheckOptions& opt = {});

struct QuarticEigenproblem {
  PhysParams params;
  double lambda = 0.0;
  double k_t = 0.5;
  TemporalGrid grid{-12.0, 12.0, 512};

  double potential(double tau) const;
};

enum class Discretization { Spectral, FiniteDifference };

struct QuarticSpectrum {
  std::vector<double> energies;
  std::vector<std::vector<double>> states;  // sum phi^2 dtau = 1
};

// Dense Hermitian diagonalization of -(hbar^2/mc^2) d2 + (lambda - k_t tau^2/2)^2 / (4 m c^2).
QuarticSpectrum quartic_eigensolve(const QuarticEigenproblem& qp, int n_states,
                                   Discretization d = Discretization::Spectral);

// Shooting on [t_min, t_max] with Sturm node counting and bracketing.
std::vector<double> quartic_shooting(const QuarticEigenproblem& qp, int n_states);

// exp[(i/hbar)(m omega_t^2 T^3 / 3 + lambda T)]
cplx collective_factor(const PhysParams& p, double lambda, double T);

}  // namespace carroll::propagator
