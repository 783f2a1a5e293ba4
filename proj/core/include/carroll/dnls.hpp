#pragma once

#include <functional>
#include <vector>

#include "carroll/grid.hpp"
#include "carroll/params.hpp"

namespace carroll::dnls {

// Quintic coefficient of i psi_X + psi_TT - i|psi|^2 psi_T + beta |psi|^4 psi = 0.
inline constexpr double kBeta = -3.0 / 16.0;

struct MeanFieldProblem {
  PhysParams params;
  std::function<double(double x, double t)> U_ext;  // empty means U = 0
  std::function<double(double x)> g;                // empty means g0
  TemporalGrid grid{-20.0, 20.0, 512};

  double coupling(double x) const { return g ? g(x) : params.g0; }
};

// Right-hand side of i hbar c dphi/dx for the full mean-field equation, term
// by term; derivatives of phi are spectral, dU/dt by central differences.
Field mean_field_rhs(const MeanFieldProblem& p, double x, const Field& phi);

struct DnlsScales {
  double tau_pulse = 1.0;
  double L = 2.0;  // 2 m c^3 tau^2 / hbar
  double A = 0.5;  // sqrt(hbar / (4 g0 c tau))
  static constexpr double beta = kBeta;
};

DnlsScales make_scales(const PhysParams& p, double tau_pulse);

// x = L X, t = tau T, phi = A psi.
Field to_dimensionless(const DnlsScales& s, const Field& phi);
Field to_physical(const DnlsScales& s, const Field& psi);

// One Strang step: half linear, implicit-midpoint nonlinear stage, half
// linear. Throws StepTooLarge if dX > dT^2 / 4.
Field dnls_step(const Field& psi, double dX, bool time_reflect = false);

// T -> -T on a grid symmetric about zero.
Field reflect(const Field& psi);

struct Diagnostics {
  double X;
  double norm;            // sqrt(int |psi|^2 dT)
  double peak_amplitude;  // max |psi|
  double peak_position;
  double rms_width;
  double participation_ratio;  // (int |psi|^2)^2 / int |psi|^4
};

Diagnostics diagnose(const Field& psi, double X);

using Observer = std::function<void(double X, const Field&)>;

struct EvolveResult {
  Field psi;
  std::vector<Diagnostics> diagnostics;
};

// Evolves to X_final with steps no larger than dX; diagnostics (and observer
// calls) every `snapshot_every` steps plus the final state.
EvolveResult evolve_dnls(const Field& psi0, double X_final, double dX, const Observer& obs = {},
                         std::size_t snapshot_every = 0, bool time_reflect = false);

// Exact moving solitary wave of the dimensionless equation:
// a sech(xi/w) exp(i[kappa (T - T0) - Omega X + (a^2 w / 4) tanh(xi/w)]),
// xi = T - T0 - 2 kappa X, kappa = 2 / (a^2 w^2), Omega = kappa^2 - 1/w^2.
Field solitary_wave(const TemporalGrid& g, double amplitude, double width, double T0, double X);

struct PhysicalOptions {
  // Test-only negative control: scales the physical quintic coefficient so
  // the reduction check can be shown to fail. Leave at 1.
  double quintic_scale = 1.0;
};

// Split-step evolution of the U = 0, constant-g physical equation.
Field evolve_physical(const MeanFieldProblem& p, const Field& phi0, double x_final, double dx,
                      const PhysicalOptions& opt = {});

// max |to_dimensionless(evolve_physical) - evolve_dnls| / max |psi| for the
// solitary-wave initial data at matched resolution.
double reduction_discrepancy(const PhysParams& p, double tau_pulse, const TemporalGrid& T_grid,
                             double X_final, double dX, const PhysicalOptions& opt = {});

}  // namespace carroll::dnls
