#pragma once

#include <functional>
#include <vector>

#include "carroll/errors.hpp"
#include "carroll/grid.hpp"
#include "carroll/params.hpp"

namespace carroll::dft {

// Effective fields sampled on the grid. Both are real.
struct KsSystem {
  PhysParams params;
  TemporalGrid grid{-10.0, 10.0, 256};
  std::vector<double> Phi_s;  // scalar effective field
  std::vector<double> U_s;    // gauge effective field
  std::vector<double> occupations{1.0};

  // Samples fn on the grid; an empty fn gives zeros.
  static std::vector<double> sample(const TemporalGrid& g, const std::function<double(double)>& fn);
  void validate() const;
};

struct KsSolution {
  std::vector<double> eps;
  std::vector<Field> orbitals;  // normalized, int |phi|^2 dt = 1
};

// Lowest n_states eigenpairs of (1/2mc^2)(-i hbar d/dt - U_s)^2 + Phi_s by
// dense diagonalization (at most 4096 points).
KsSolution ks_solve(const KsSystem& sys, std::size_t n_states);

struct DensityPair {
  std::vector<double> n;
  std::vector<double> j_t;
};

// n = sum f_k |phi_k|^2, j_t = (1/mc^2) sum f_k Re{phi_k^* (-i hbar d/dt - U_s) phi_k}.
DensityPair densities_from_orbitals(const KsSystem& sys, const std::vector<Field>& orbitals);

struct EffectiveFields {
  std::vector<double> Phi_s;
  std::vector<double> U_s;
};

using Functional = std::function<EffectiveFields(const DensityPair&)>;

struct NotConverged : NumericError {
  NotConverged(const std::string& what, std::vector<double> h)
      : NumericError(what), history(std::move(h)) {}
  std::vector<double> history;
};

struct ScfResult {
  KsSystem system;
  KsSolution solution;
  DensityPair densities;
  std::vector<double> history;  // max-norm density change per iteration
};

// Linear mixing on (n, j_t), starting from the densities of sys as given.
ScfResult scf_loop(const KsSystem& sys, const Functional& functional, double mix, double tol,
                   int max_iter);

// Test fixtures: density-independent fields, and Phi_ext + g_H n.
Functional external_functional(std::vector<double> Phi_ext, std::vector<double> U_ext);
Functional hartree_functional(std::vector<double> Phi_ext, double g_H);

}  // namespace carroll::dft
