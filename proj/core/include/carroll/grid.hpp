#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace carroll {

using cplx = std::complex<double>;

// Uniform periodic grid: t_i = t_min + i*dt, i < n, dt = (t_max - t_min)/n.
class TemporalGrid {
 public:
  TemporalGrid(double t_min, double t_max, std::size_t n_points);

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  double length() const { return t_max_ - t_min_; }
  double operator[](std::size_t i) const { return t_min_ + static_cast<double>(i) * dt_; }
  std::vector<double> points() const;

  bool operator==(const TemporalGrid&) const = default;

 private:
  double t_min_, t_max_;
  std::size_t n_;
  double dt_;
};

// Tensor product of 1..3 temporal grids, row-major (last axis fastest).
class Grid {
 public:
  Grid(TemporalGrid g);  // NOLINT: implicit 1-D grid is convenient
  explicit Grid(std::vector<TemporalGrid> axes);

  std::size_t rank() const { return axes_.size(); }
  const TemporalGrid& axis(std::size_t a) const { return axes_.at(a); }
  const std::vector<TemporalGrid>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  std::vector<std::size_t> shape() const;
  double cell_volume() const;
  std::size_t stride(std::size_t a) const;

  // Coordinates of flat index k.
  void coords(std::size_t k, std::span<double> out) const;

  bool operator==(const Grid&) const = default;

 private:
  std::vector<TemporalGrid> axes_;
  std::size_t size_;
};

struct Field {
  Grid grid;
  std::vector<cplx> values;

  explicit Field(Grid g);
  Field(Grid g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

// sqrt(sum |f|^2 dV). Throws NumericError on non-finite samples.
double l2_norm(const Field& f);

// Inner product <a,b> = sum conj(a) b dV.
cplx inner(const Field& a, const Field& b);

// Largest |f| within 5% of any grid edge.
double edge_amplitude(const Field& f);

// Throws BoundaryLeak when edge_amplitude(f) > tol.
void require_decay(const Field& f, double tol = 1e-10, const char* where = "field");

}  // namespace carroll
