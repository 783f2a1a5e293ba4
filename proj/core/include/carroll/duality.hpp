#pragma once

#include <array>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "carroll/params.hpp"

namespace carroll::duality {

// y1(x0), y1'(x0), y2(x0), y2'(x0)
struct FundamentalIcs {
  double y1 = 0.0, dy1 = 1.0, y2 = 1.0, dy2 = 0.0;
};

struct DualityInput {
  std::function<double(double)> V_sch;
  double E_sch = 0.0;
  double E0 = 1.0;  // Carroll energy label, > 0
  double mass = 1.0;
  double hbar = 1.0;
  double a = -1.0, b = 1.0;
  FundamentalIcs ics;
  double ic_point = std::numeric_limits<double>::quiet_NaN();  // NaN means a
  double anchor = std::numeric_limits<double>::quiet_NaN();    // NaN means ic_point
  std::size_t samples = 2001;
  double min_window = 0.0;

  double q(double x) const;  // (2m/hbar^2)(V - E)
  double ic() const;
  double anchor_point() const;
};

// Samples of y'' = q y on a uniform x grid over [a, b].
struct FundamentalSystem {
  std::vector<double> x, y1, dy1, y2, dy2;
  // y1 y2' - y1' y2
  double wronskian(std::size_t i) const { return y1[i] * dy2[i] - dy1[i] * y2[i]; }
};

FundamentalSystem solve_fundamental(const DualityInput& in);

// tau(x) = (hbar/E0) arctan(y1/y2), unwrapped; delta = tau^{-1}.
class SchwarzianMap {
 public:
  explicit SchwarzianMap(DualityInput in);

  const DualityInput& input() const { return in_; }
  const FundamentalSystem& system() const { return sys_; }
  std::pair<double, double> valid_interval() const;
  std::pair<double, double> tau_range() const;

  // ODE state (y1, y1', y2, y2') at x, integrated from the nearest node.
  std::array<double, 4> state_at(double x) const;
  double sigma(double x) const;
  double tau(double x) const;
  double dtau(double x) const;
  double d2tau(double x) const;
  // tau at x + j h for j = -m..m, from one continuous integration.
  std::vector<double> tau_stencil(double x, double h, int m) const;
  std::vector<double> sigma_stencil(double x, double h, int m) const;

  double delta(double t) const;
  double ddelta(double t) const;
  double d2delta(double t) const;

 private:
  double tau_from_state(const std::array<double, 4>& s, std::size_t node) const;
  std::size_t nearest_node(double x) const;

  DualityInput in_;
  FundamentalSystem sys_;
  std::vector<double> theta_;  // unwrapped atan2(y1, y2)
  std::size_t lo_ = 0, hi_ = 0;
  int orient_ = 1;
};

SchwarzianMap build_map(const DualityInput& in);

// {f, x} from f', f'', f'''.
double schwarzian(double d1, double d2, double d3);

// max |{tau,x} + 2 E0^2 tau'^2 / hbar^2 + (4m/hbar^2)(V - E)| using sixth-order
// differences of tau with spacing h.
double verify_inverse_master(const SchwarzianMap& map, std::span<const double> x_samples,
                             double h = 0.02);
// max |{sigma,x} + 2q|
double pure_schwarzian_residual(const SchwarzianMap& map, std::span<const double> x_samples,
                                double h = 0.02);

// V_car(t) = -(i hbar / 2) delta''/delta'. Throws SingularMap outside the map.
std::vector<std::complex<double>> carroll_potential(const SchwarzianMap& map,
                                                    std::span<const double> t_samples);

// E + [i hbar V_car' + V_car^2 - E0^2] / (2 m delta'^2), which must equal V_sch(delta(t)).
std::complex<double> forward_potential(const SchwarzianMap& map, double t);

struct CoupledOptions {
  double energy_fraction = 0.8;  // E_sch = fraction * hbar Omega / 2 per channel
  double E0 = 1.0;
  double half_width = 3.0;
  std::size_t samples = 2001;
};

// Centre-of-mass (M = 2m, Omega_X = omega) and relative (mu = m/2,
// Omega_xi = sqrt(omega^2 + 2 k_c / m)) channels, built from x = 0 so the
// relative map is odd.
class CoupledOscillatorMap {
 public:
  CoupledOscillatorMap(const PhysParams& p, CoupledOptions opt = {});

  const SchwarzianMap& map_X() const { return X_; }
  const SchwarzianMap& map_xi() const { return xi_; }
  double Omega_X() const { return wX_; }
  double Omega_xi() const { return wxi_; }

  std::pair<double, double> mixed(double t1, double t2) const;
  std::complex<double> potential(double t1, double t2) const;

 private:
  double wX_, wxi_;
  SchwarzianMap X_, xi_;
};

CoupledOscillatorMap coupled_oscillator_map(const PhysParams& p, CoupledOptions opt = {});

}  // namespace carroll::duality
