#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "carroll/grid.hpp"

namespace carroll::coherence {

enum class Statistics { Bose, Fermi };

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct OrbitalSet {
  TemporalGrid grid;
  std::vector<std::vector<cplx>> orbitals;
  std::vector<double> occupations;
  Statistics statistics = Statistics::Fermi;

  double particle_number() const;
  // Throws OrthonormalityError (overlaps off by > 1e-10) or InvalidArgument.
  void validate() const;
};

inline constexpr double kDensityFloor = 1e-14;

struct CoherenceData {
  TemporalGrid grid;
  Eigen::MatrixXcd gamma;
  std::vector<double> n;
  Eigen::MatrixXd n2;
  Eigen::MatrixXcd g1;
  Eigen::MatrixXd g2;
  BoolMatrix mask;  // true where n(t) n(t') is above the floor
};

// gamma(t, t') = sum_k f_k phi_k(t) conj(phi_k(t')).
Eigen::MatrixXcd rdm_from_orbitals(const OrbitalSet& orbs);

// n(t) n(t') -+ |gamma(t, t')|^2 (minus for Fermi).
Eigen::MatrixXd wick_pair_density(const Eigen::MatrixXcd& gamma, Statistics s);

// N(N-1) int |Psi|^2 dt_3..dt_N for the normalized permanent/determinant
// built from the occupied orbitals (integer occupations, N <= 3).
Eigen::MatrixXd brute_force_pair_density(const OrbitalSet& orbs);

// Fills g1 = gamma / sqrt(n n'), g2 = n2 / (n n') and the mask; masked
// entries are set to zero rather than NaN.
void finalize(CoherenceData& d);

CoherenceData coherence_from_orbitals(const OrbitalSet& orbs, bool brute_force = false);

// g2 matrix of a finalized data set.
inline const Eigen::MatrixXd& g2(const CoherenceData& d) { return d.g2; }

// (Psi(t1,t2) +- Psi(t2,t1)) normalized. Throws ZeroSector when the
// projection vanishes.
Field exchange_project(const Field& f, Statistics s);

// Counter-based generator: uniform(counter) = mix(seed + counter * golden).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;  // [0, 1)

 private:
  std::uint64_t seed_;
};

struct HbtHistogram {
  std::vector<double> edges;
  std::vector<double> singles;
  Eigen::MatrixXd pairs;     // ordered pair counts
  Eigen::MatrixXd g2;        // empirical binned g2
  Eigen::MatrixXd g2_sigma;  // Poisson error bars
  BoolMatrix valid;          // cells with enough counts to quote an error bar
  std::size_t runs = 0;
  std::string warning;
};

// Draws arrival-time pairs from n2 / (N(N-1)) by inverse transform on the
// gridded CDF and histograms them into `bins` equal bins over the grid
// (bins must divide the grid size so grid cells never straddle a bin).
HbtHistogram sample_arrivals(const CoherenceData& d, std::size_t runs, std::uint64_t seed,
                             std::size_t bins = 16, std::size_t min_count = 100);

// Exact binned ratio (int int n2) / (int n int n) for comparison.
Eigen::MatrixXd exact_binned_g2(const CoherenceData& d, std::size_t bins);

}  // namespace carroll::coherence
