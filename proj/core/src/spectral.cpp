#include "carroll/spectral.hpp"


#include <cmath>
#include <mutex>
#include <numbers>

#include "carroll/errors.hpp"
#include "fftw_util.hpp"

namespace carroll {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> wavenumbers(const TemporalGrid& g, bool zero_nyquist) {
  const auto n = g.size();
  const double base = 2.0 * std::numbers::pi / g.length();
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<double>(j);
    k[j] = base * (j <= n / 2 ? sj : sj - static_cast<double>(n));
  }
  // Nyquist kept positive so k^2 is the usual (pi/dt)^2.
  k[n / 2] = zero_nyquist ? 0.0 : base * static_cast<double>(n / 2);
  return k;
}

struct Fft::Impl {
  Grid grid;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  explicit Impl(const Grid& g) : grid(g) {}
};

Fft::Fft(const Grid& g) : impl_(std::make_unique<Impl>(g)) {
  std::vector<int> dims;
  for (auto s : g.shape()) dims.push_back(static_cast<int>(s));
  std::vector<cplx> scratch(g.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(fftw_planner_mutex());
  impl_->fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p, FFTW_FORWARD, flags);
  impl_->bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p, FFTW_BACKWARD, flags);
  if (!impl_->fwd || !impl_->bwd) throw NumericError("Fft: plan creation failed");
}

Fft::~Fft() {
  if (!impl_) return;
  std::lock_guard lock(fftw_planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
}

Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

const Grid& Fft::grid() const { return impl_->grid; }

void Fft::forward(std::vector<cplx>& data) const {
  if (data.size() != impl_->grid.size()) throw ShapeError("Fft: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->fwd, p, p);
}

void Fft::backward(std::vector<cplx>& data) const {
  if (data.size() != impl_->grid.size()) throw ShapeError("Fft: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(impl_->bwd, p, p);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= s;
}

SpectralDerivative::SpectralDerivative(const Grid& g) : fft_(g) {
  for (const auto& a : g.axes()) {
    k_odd_.push_back(wavenumbers(a, true));
    k_even_.push_back(wavenumbers(a, false));
  }
}

void SpectralDerivative::apply(std::vector<cplx>& data, int order, std::size_t axis) const {
  if (order != 1 && order != 2)
    throw UnsupportedOrder("spectral_derivative: order must be 1 or 2");
  const auto& g = fft_.grid();
  if (axis >= g.rank()) throw ShapeError("spectral_derivative: axis out of range");
  fft_.forward(data);
  const auto n = g.axis(axis).size();
  const auto stride = g.stride(axis);
  const auto& k = order == 1 ? k_odd_[axis] : k_even_[axis];
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    const double kk = k[(idx / stride) % n];
    data[idx] *= order == 1 ? cplx(0.0, kk) : cplx(-kk * kk, 0.0);
  }
  fft_.backward(data);
}

Field spectral_derivative(const Field& f, int order, std::size_t axis) {
  SpectralDerivative d(f.grid);
  Field out = f;
  d.apply(out.values, order, axis);
  return out;
}

}  // namespace carroll
