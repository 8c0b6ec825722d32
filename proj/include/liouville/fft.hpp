#pragma once

// Minimal RAII wrapper over FFTW real-to-complex transforms.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "liouville/error.hpp"

namespace liouville::fft {

/// FFTW planning is not thread-safe; every plan create/destroy goes through this lock.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_buffer<T> allocate(std::size_t n) {
  T* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw NumericalError("fftw_malloc failed");
  return fftw_buffer<T>(p);
}

/// Smallest 2^a 3^b 5^c >= n.
inline std::size_t good_size(std::size_t n) {
  std::size_t best = SIZE_MAX;
  for (std::size_t a = 1; a < 2 * n + 2; a *= 2)
    for (std::size_t b = a; b < 2 * n + 2; b *= 3)
      for (std::size_t c = b; c < 2 * n + 2; c *= 5)
        if (c >= n && c < best) best = c;
  return best;
}

/// Forward/backward real transforms of fixed length P.
///
/// Execution uses the new-array interface on caller buffers, so one plan
/// pair can be shared by concurrent callers.
class RealPlan {
 public:
  explicit RealPlan(std::size_t P) : P_(P) {
    auto in = allocate<double>(P);
    auto out = allocate<fftw_complex>(P / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(P), in.get(), out.get(), FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(P), out.get(), in.get(), FFTW_ESTIMATE);
    if (fwd_ == nullptr || bwd_ == nullptr) throw NumericalError("FFTW planning failed");
  }
  RealPlan(const RealPlan&) = delete;
  RealPlan& operator=(const RealPlan&) = delete;
  ~RealPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  std::size_t size() const { return P_; }
  std::size_t spectrum_size() const { return P_ / 2 + 1; }

  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(fwd_, in, out); }
  /// Unnormalized inverse; destroys `in`.
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(bwd_, in, out); }

 private:
  std::size_t P_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace liouville::fft
