#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <new>
#include <vector>

namespace carroll {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& fftw_planner_mutex();

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}  // NOLINT
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { fftw_free(p); }
  bool operator==(const FftwAllocator&) const = default;
};

using AlignedBuffer = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

}  // namespace carroll
