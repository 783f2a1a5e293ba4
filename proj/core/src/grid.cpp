#include "carroll/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carroll/errors.hpp"
#include "carroll/params.hpp"

namespace carroll {

void PhysParams::validate() const {
  if (!(m > 0) || !(c > 0) || !(hbar > 0) || !(sigma > 0) || !(s_rel > 0))
    throw InvalidArgument("PhysParams: m, c, hbar, sigma, s_rel must be positive");
}

TemporalGrid::TemporalGrid(double t_min, double t_max, std::size_t n_points)
    : t_min_(t_min), t_max_(t_max), n_(n_points), dt_((t_max - t_min) / static_cast<double>(n_points)) {
  if (n_points < 16 || (n_points & (n_points - 1)) != 0)
    throw InvalidArgument("TemporalGrid: n_points must be a power of two >= 16, got " +
                          std::to_string(n_points));
  if (!(t_max > t_min)) throw InvalidArgument("TemporalGrid: t_max must exceed t_min");
}

std::vector<double> TemporalGrid::points() const {
  std::vector<double> p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = (*this)[i];
  return p;
}

Grid::Grid(TemporalGrid g) : Grid(std::vector<TemporalGrid>{g}) {}

Grid::Grid(std::vector<TemporalGrid> axes) : axes_(std::move(axes)), size_(1) {
  if (axes_.empty() || axes_.size() > 3)
    throw InvalidArgument("Grid: rank must be 1..3");
  for (const auto& a : axes_) size_ *= a.size();
}

std::vector<std::size_t> Grid::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes_) s.push_back(a.size());
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.dt();
  return v;
}

std::size_t Grid::stride(std::size_t a) const {
  std::size_t s = 1;
  for (std::size_t b = a + 1; b < axes_.size(); ++b) s *= axes_[b].size();
  return s;
}

void Grid::coords(std::size_t k, std::span<double> out) const {
  for (std::size_t a = axes_.size(); a-- > 0;) {
    const auto n = axes_[a].size();
    out[a] = axes_[a][k % n];
    k /= n;
  }
}

Field::Field(Grid g) : grid(std::move(g)), values(grid.size()) {}

Field::Field(Grid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw ShapeError("Field: value count does not match grid");
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const auto& z : f.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("l2_norm: non-finite sample");
    s += std::norm(z);
  }
  return std::sqrt(s * f.grid.cell_volume());
}

cplx inner(const Field& a, const Field& b) {
  if (a.size() != b.size()) throw ShapeError("inner: size mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid.cell_volume();
}

double edge_amplitude(const Field& f) {
  const auto& g = f.grid;
  std::vector<std::size_t> band(g.rank());
  for (std::size_t a = 0; a < g.rank(); ++a)
    band[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(g.axis(a).size()))));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::size_t rem = k;
    bool edge = false;
    for (std::size_t a = g.rank(); a-- > 0;) {
      const auto n = g.axis(a).size();
      const auto i = rem % n;
      rem /= n;
      if (i < band[a] || i >= n - band[a]) edge = true;
    }
    if (edge) worst = std::max(worst, std::abs(f.values[k]));
  }
  return worst;
}

void require_decay(const Field& f, double tol, const char* where) {
  const double e = edge_amplitude(f);
  if (!(e <= tol))
    throw BoundaryLeak(std::string(where) + ": edge amplitude " + std::to_string(e) +
                       " exceeds " + std::to_string(tol));
}

}  // namespace carroll
