#pragma once

#include <memory>
#include <vector>

#include "carroll/grid.hpp"

namespace carroll {

// Angular wavenumbers of a periodic grid in FFT order. For odd derivatives
// the Nyquist entry is zeroed, since that mode has no odd real derivative.
std::vector<double> wavenumbers(const TemporalGrid& g, bool zero_nyquist = false);

// Owns forward/backward FFTW plans for one grid shape. Plans are created with
// FFTW_ESTIMATE so results do not depend on timing measurements.
class Fft {
 public:
  explicit Fft(const Grid& g);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  const Grid& grid() const;
  void forward(std::vector<cplx>& data) const;
  // Normalized: backward(forward(x)) == x.
  void backward(std::vector<cplx>& data) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Spectral differentiation along one axis, reusing a plan.
class SpectralDerivative {
 public:
  explicit SpectralDerivative(const Grid& g);

  // order in {1,2}; throws UnsupportedOrder otherwise.
  void apply(std::vector<cplx>& data, int order, std::size_t axis = 0) const;
  const Fft& fft() const { return fft_; }

 private:
  Fft fft_;
  std::vector<std::vector<double>> k_odd_, k_even_;
};

Field spectral_derivative(const Field& f, int order, std::size_t axis = 0);

}  // namespace carroll
