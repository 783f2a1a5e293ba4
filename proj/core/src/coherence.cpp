#include "carroll/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carroll/errors.hpp"

namespace carroll::coherence {

double OrbitalSet::particle_number() const {
  double n = 0.0;
  for (double f : occupations) n += f;
  return n;
}

void OrbitalSet::validate() const {
  if (orbitals.size() != occupations.size())
    throw InvalidArgument("OrbitalSet: one occupation per orbital");
  for (const auto& o : orbitals)
    if (o.size() != grid.size()) throw ShapeError("OrbitalSet: orbital does not match grid");
  for (double f : occupations) {
    if (f < 0) throw InvalidArgument("OrbitalSet: negative occupation");
    if (statistics == Statistics::Fermi && f != 0.0 && f != 1.0)
      throw InvalidArgument("OrbitalSet: Fermi occupations must be 0 or 1");
  }
  const double dt = grid.dt();
  for (std::size_t k = 0; k < orbitals.size(); ++k)
    for (std::size_t l = 0; l <= k; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) s += std::conj(orbitals[k][i]) * orbitals[l][i];
      s *= dt;
      const double target = k == l ? 1.0 : 0.0;
      if (std::abs(s - target) > 1e-10)
        throw OrthonormalityError("OrbitalSet: overlap <" + std::to_string(k) + "|" +
                                  std::to_string(l) + "> off by " + std::to_string(std::abs(s - target)));
    }
}

Eigen::MatrixXcd rdm_from_orbitals(const OrbitalSet& orbs) {
  orbs.validate();
  const auto n = static_cast<Eigen::Index>(orbs.grid.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < orbs.orbitals.size(); ++k) {
    if (orbs.occupations[k] == 0.0) continue;
    const Eigen::Map<const Eigen::VectorXcd> phi(orbs.orbitals[k].data(), n);
    g.noalias() += orbs.occupations[k] * phi * phi.adjoint();
  }
  return g;
}

Eigen::MatrixXd wick_pair_density(const Eigen::MatrixXcd& gamma, Statistics s) {
  const auto n = gamma.rows();
  const double sign = s == Statistics::Fermi ? -1.0 : 1.0;
  Eigen::MatrixXd n2(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      n2(i, j) = gamma(i, i).real() * gamma(j, j).real() + sign * std::norm(gamma(i, j));
  return n2;
}

namespace {

// Ryser's formula: perm(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij.
cplx permanent(const cplx* a, int n) {
  cplx total = 0.0;
  for (unsigned s = 1; s < (1u << n); ++s) {
    cplx prod = 1.0;
    for (int i = 0; i < n; ++i) {
      cplx row = 0.0;
      for (int j = 0; j < n; ++j)
        if (s & (1u << j)) row += a[i * n + j];
      prod *= row;
    }
    const int bits = __builtin_popcount(s);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

cplx determinant(const cplx* a, int n) {
  if (n == 1) return a[0];
  if (n == 2) return a[0] * a[3] - a[1] * a[2];
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

Eigen::MatrixXd brute_force_pair_density(const OrbitalSet& orbs) {
  orbs.validate();
  std::vector<std::size_t> slots;
  double norm_fact = 1.0;
  for (std::size_t k = 0; k < orbs.orbitals.size(); ++k) {
    const double f = orbs.occupations[k];
    if (f != std::floor(f)) throw InvalidArgument("brute_force_pair_density: integer occupations only");
    for (int c = 0; c < static_cast<int>(f); ++c) slots.push_back(k);
    norm_fact *= factorial(static_cast<int>(f));
  }
  const int N = static_cast<int>(slots.size());
  if (N > 3) throw TooLarge("brute_force_pair_density: N <= 3");
  if (N < 2) throw InvalidArgument("brute_force_pair_density: need N >= 2");
  const bool fermi = orbs.statistics == Statistics::Fermi;
  // 1/sqrt(N! prod n_k!) for permanents, 1/sqrt(N!) for determinants.
  const double norm = 1.0 / std::sqrt(factorial(N) * (fermi ? 1.0 : norm_fact));
  const auto n = orbs.grid.size();
  const double dt = orbs.grid.dt();
  const auto& phi = orbs.orbitals;

  auto amp = [&](std::size_t i1, std::size_t i2, std::size_t i3) {
    const std::size_t idx[3] = {i1, i2, i3};
    cplx a[9];
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) a[r * N + c] = phi[slots[static_cast<std::size_t>(c)]][idx[r]];
    return norm * (fermi ? determinant(a, N) : permanent(a, N));
  };

  Eigen::MatrixXd n2(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double pref = N * (N - 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      if (N == 2) {
        s = std::norm(amp(i, j, 0));
      } else {
        for (std::size_t k = 0; k < n; ++k) s += std::norm(amp(i, j, k));
        s *= dt;
      }
      n2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pref * s;
    }
  return n2;
}

void finalize(CoherenceData& d) {
  const auto n = d.gamma.rows();
  d.n.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d.n[static_cast<std::size_t>(i)] = d.gamma(i, i).real();
  d.g1 = Eigen::MatrixXcd::Zero(n, n);
  d.g2 = Eigen::MatrixXd::Zero(n, n);
  d.mask = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = d.n[static_cast<std::size_t>(i)], b = d.n[static_cast<std::size_t>(j)];
      if (a > kDensityFloor && b > kDensityFloor) {
        d.mask(i, j) = true;
        d.g1(i, j) = d.gamma(i, j) / std::sqrt(a * b);
        d.g2(i, j) = d.n2(i, j) / (a * b);
      }
    }
}

CoherenceData coherence_from_orbitals(const OrbitalSet& orbs, bool brute_force) {
  CoherenceData d{orbs.grid, rdm_from_orbitals(orbs), {}, {}, {}, {}, {}};
  d.n2 = brute_force ? brute_force_pair_density(orbs) : wick_pair_density(d.gamma, orbs.statistics);
  finalize(d);
  return d;
}

Field exchange_project(const Field& f, Statistics s) {
  const auto& g = f.grid;
  if (g.rank() != 2 || !(g.axis(0) == g.axis(1)))
    throw ShapeError("exchange_project: needs a square two-time grid");
  const auto n = g.axis(0).size();
  const double sign = s == Statistics::Fermi ? -1.0 : 1.0;
  Field out(g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = 0.5 * (f[i * n + j] + sign * f[j * n + i]);
  const double nrm = l2_norm(out);
  const double ref = l2_norm(f);
  if (!(nrm > 1e-12 * std::max(ref, 1e-300))) throw ZeroSector("exchange_project: empty sector");
  for (auto& v : out.values) v /= nrm;
  return out;
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  std::uint64_t z = seed_ + counter * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

namespace {
std::size_t bin_of(double t, double lo, double width, std::size_t bins) {
  const auto b = static_cast<std::ptrdiff_t>(std::floor((t - lo) / width));
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1));
}
}  // namespace

HbtHistogram sample_arrivals(const CoherenceData& d, std::size_t runs, std::uint64_t seed,
                             std::size_t bins, std::size_t min_count) {
  const auto& g = d.grid;
  const auto n = g.size();
  if (bins < 1 || n % bins != 0) throw InvalidArgument("sample_arrivals: bins must divide the grid size");
  HbtHistogram h;
  h.runs = runs;
  if (runs < 1000) h.warning = "InsufficientStatistics: fewer than 1000 runs";

  std::vector<double> cdf(n * n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      acc += std::max(0.0, d.n2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      cdf[i * n + j] = acc;
    }
  if (!(acc > 0)) throw NumericError("sample_arrivals: pair density vanishes");
  for (auto& c : cdf) c /= acc;

  const double lo = g.t_min(), width = g.length() / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + static_cast<double>(b) * width);
  h.singles.assign(bins, 0.0);
  h.pairs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(bins));

  const CounterRng rng(seed);
  const double dt = g.dt();
  for (std::size_t r = 0; r < runs; ++r) {
    const double u = rng.uniform(3 * r);
    const auto cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto c = std::min(cell, n * n - 1);
    const double t1 = g[c / n] + dt * rng.uniform(3 * r + 1);
    const double t2 = g[c % n] + dt * rng.uniform(3 * r + 2);
    const auto a = bin_of(t1, lo, width, bins), b = bin_of(t2, lo, width, bins);
    h.singles[a] += 1.0;
    h.singles[b] += 1.0;
    h.pairs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
    h.pairs(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += 1.0;
  }

  const auto B = static_cast<Eigen::Index>(bins);
  h.g2 = Eigen::MatrixXd::Zero(B, B);
  h.g2_sigma = Eigen::MatrixXd::Zero(B, B);
  h.valid = BoolMatrix::Constant(B, B, false);
  const double R = static_cast<double>(runs);
  for (Eigen::Index a = 0; a < B; ++a)
    for (Eigen::Index b = 0; b < B; ++b) {
      const double sa = h.singles[static_cast<std::size_t>(a)] / R;
      const double sb = h.singles[static_cast<std::size_t>(b)] / R;
      if (sa <= 0 || sb <= 0) continue;
      const double p = h.pairs(a, b);
      h.g2(a, b) = p / R / (sa * sb);
      // Runs landing in the unordered cell {a, b}; diagonal cells count twice.
      const double events = a == b ? p / 2.0 : p;
      if (events >= static_cast<double>(min_count)) {
        h.valid(a, b) = true;
        h.g2_sigma(a, b) = h.g2(a, b) / std::sqrt(events);
      }
    }
  return h;
}

Eigen::MatrixXd exact_binned_g2(const CoherenceData& d, std::size_t bins) {
  const auto& g = d.grid;
  const auto n = g.size();
  const double lo = g.t_min(), width = g.length() / static_cast<double>(bins);
  const auto B = static_cast<Eigen::Index>(bins);
  std::vector<double> nb(bins, 0.0);
  Eigen::MatrixXd n2b = Eigen::MatrixXd::Zero(B, B);
  // Grid cells [t_i, t_i + dt) are assigned whole to the bin of their midpoint.
  std::vector<std::size_t> of(n);
  for (std::size_t i = 0; i < n; ++i) of[i] = bin_of(g[i] + 0.5 * g.dt(), lo, width, bins);
  for (std::size_t i = 0; i < n; ++i) {
    nb[of[i]] += d.n[i];
    for (std::size_t j = 0; j < n; ++j)
      n2b(static_cast<Eigen::Index>(of[i]), static_cast<Eigen::Index>(of[j])) +=
          d.n2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(B, B);
  for (Eigen::Index a = 0; a < B; ++a)
    for (Eigen::Index b = 0; b < B; ++b) {
      const double den = nb[static_cast<std::size_t>(a)] * nb[static_cast<std::size_t>(b)];
      if (den > 0) out(a, b) = n2b(a, b) / den;
    }
  return out;
}

}  // namespace carroll::coherence
