#pragma once

#include <vector>

namespace carroll {

// Physical constants and couplings. Defaults are the two-oscillator figure
// parameters; omega_t, k_t, g0, lambda and ke_q are our own defaults.
struct PhysParams {
  double m = 1.0;
  double c = 1.0;
  double hbar = 1.0;
  double omega = 0.7;
  double k_c = 1.0;
  double omega_t = 1.0;
  double k_t = 0.5;
  double sigma = 1.0;
  double t0 = 0.0;
  double s_rel = 1.0;
  double g0 = 1.0;
  double lambda = 0.0;
  std::vector<double> ke_q{1.0, 1.0};

  // Throws InvalidArgument unless m, c, hbar, sigma, s_rel are positive.
  void validate() const;
};

}  // namespace carroll
