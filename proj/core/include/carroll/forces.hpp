#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "carroll/params.hpp"

namespace carroll::forces {

struct SpatialPotential {
  int N = 0;
  std::function<double(std::span<const double>)> evaluate;
  std::optional<std::function<std::vector<double>(std::span<const double>)>> analytic_grad;
};

// sum_j dU/dx_j. Uses the analytic gradient when present, else fourth-order
// central differences with h = 1e-5 (1 + |x_j|).
double collective_force(const SpatialPotential& p, std::span<const double> x);

// Same, always with the numeric gradient.
double collective_force_numeric(const SpatialPotential& p, std::span<const double> x);

// -sum_{j<k} ke_q[j] ke_q[k] / sqrt((x_j - x_k)^2 + eps^2). Charges are
// pre-multiplied by sqrt(k_e), so each product carries one k_e.
SpatialPotential coulomb_potential(std::vector<double> charges, double softening = 0.1);

// On-site m omega^2 / 2 plus nearest-neighbour k_c / 2.
SpatialPotential oscillator_chain(const PhysParams& p, int N);

// a * p + b * q (gradient is analytic only if both are).
SpatialPotential linear_combination(double a, const SpatialPotential& p, double b,
                                    const SpatialPotential& q);

// Tests |U(x + s) - U(x)| < 1e-9 at random x in [-box, box]^N and shifts s.
bool is_translation_invariant(const SpatialPotential& p, int samples,
                              std::uint64_t seed = 1, double box = 3.0);

}  // namespace carroll::forces
