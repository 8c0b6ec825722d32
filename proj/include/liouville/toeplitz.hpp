#pragma once

// Toeplitz symbols of the hat-function discretizations and their fast application.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "liouville/fft.hpp"

namespace liouville {

namespace detail {
inline double xlogx(double s) { return s == 0.0 ? 0.0 : s * std::log(std::abs(s)); }
}  // namespace detail

/// (1/pi) PV \int phi(s) / (m - s) ds for the unit hat phi centred at 0.
///
/// The Hilbert transform of sum_k f_k phi((y - x_k)/h) at x_i is sum_k c(i-k) f_k,
/// independent of h. Odd in m.
inline double hilbert_coefficient(long m) {
  if (m == 0) return 0.0;
  if (m < 0) return -hilbert_coefficient(-m);
  const double dm = static_cast<double>(m);
  if (m < 8) {
    return (detail::xlogx(dm + 1.0) - 2.0 * detail::xlogx(dm) + detail::xlogx(dm - 1.0)) / std::numbers::pi;
  }
  // second difference of m log|m| expanded in u = 1/m
  const double u = 1.0 / dm, u2 = u * u;
  double term = u, sum = 0.0;
  for (int k = 0; k < 24; ++k) {
    sum += term / ((2.0 * k + 1.0) * (k + 1.0));
    term *= u2;
  }
  return sum / std::numbers::pi;
}

/// \int phi(s) log|m - s| ds for the unit hat phi, so that
/// \int log|x_i - y| sum_k f_k phi_k(y) dy = sum_k f_k h (log h + J(i-k)). Even in m.
inline double log_kernel_coefficient(long m) {
  const long a = std::abs(m);
  if (a < 8) {
    auto psi = [](double s) { return s == 0.0 ? 0.0 : 0.5 * s * s * std::log(std::abs(s)) - 0.75 * s * s; };
    const double dm = static_cast<double>(a);
    return psi(dm + 1.0) - 2.0 * psi(dm) + psi(dm - 1.0);
  }
  const double u = 1.0 / static_cast<double>(a), u2 = u * u;
  double term = u2, sum = 0.0;
  for (int j = 2; j < 26; ++j) {
    const double aj = 4.0 / (2.0 * j - 1.0) - 1.0 / j - 1.0 / (j - 1.0);
    sum += aj * term;
    term *= u2;
  }
  return std::log(static_cast<double>(a)) + 0.5 * sum;
}

/// N x N Toeplitz matrix T_{ik} = t(i - k), applied by circulant embedding
/// into a length P >= 2N-1 FFT, with an O(N^2) reference path.
class ToeplitzOperator {
 public:
  ToeplitzOperator(const std::function<double(long)>& t, std::size_t N) : N_(N) {
    if (N == 0) throw ConfigError("Toeplitz operator needs N >= 1");
    coeff_.resize(2 * N - 1);
    for (long m = -static_cast<long>(N) + 1; m < static_cast<long>(N); ++m)
      coeff_[static_cast<std::size_t>(m + static_cast<long>(N) - 1)] = t(m);

    plan_ = std::make_unique<fft::RealPlan>(fft::good_size(2 * N - 1));
    const std::size_t P = plan_->size();
    auto col = fft::allocate<double>(P);
    auto spec = fft::allocate<fftw_complex>(plan_->spectrum_size());
    for (std::size_t i = 0; i < P; ++i) col[i] = 0.0;
    for (std::size_t m = 0; m < N; ++m) col[m] = coefficient(static_cast<long>(m));
    for (std::size_t m = 1; m < N; ++m) col[P - m] = coefficient(-static_cast<long>(m));
    plan_->forward(col.get(), spec.get());
    symbol_.resize(plan_->spectrum_size());
    const double scale = 1.0 / static_cast<double>(P);
    for (std::size_t k = 0; k < symbol_.size(); ++k)
      symbol_[k] = std::complex<double>(spec[k][0], spec[k][1]) * scale;
  }

  std::size_t size() const { return N_; }
  std::size_t embedding_size() const { return plan_->size(); }

  double coefficient(long m) const { return coeff_[static_cast<std::size_t>(m + static_cast<long>(N_) - 1)]; }

  /// y = T x in O(P log P). Thread-safe.
  std::vector<double> apply(std::span<const double> x) const {
    check(x.size());
    const std::size_t P = plan_->size();
    auto buf = fft::allocate<double>(P);
    auto spec = fft::allocate<fftw_complex>(plan_->spectrum_size());
    for (std::size_t i = 0; i < N_; ++i) buf[i] = x[i];
    for (std::size_t i = N_; i < P; ++i) buf[i] = 0.0;
    plan_->forward(buf.get(), spec.get());
    for (std::size_t k = 0; k < symbol_.size(); ++k) {
      const std::complex<double> z = std::complex<double>(spec[k][0], spec[k][1]) * symbol_[k];
      spec[k][0] = z.real();
      spec[k][1] = z.imag();
    }
    plan_->backward(spec.get(), buf.get());
    return std::vector<double>(buf.get(), buf.get() + N_);
  }

  /// y = T x by direct summation.
  std::vector<double> apply_dense(std::span<const double> x) const {
    check(x.size());
    std::vector<double> y(N_, 0.0);
    for (std::size_t i = 0; i < N_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < N_; ++k) s += coefficient(static_cast<long>(i) - static_cast<long>(k)) * x[k];
      y[i] = s;
    }
    return y;
  }

 private:
  void check(std::size_t n) const {
    if (n != N_) throw DomainError("Toeplitz operator of size " + std::to_string(N_) + " applied to vector of size " +
                                   std::to_string(n));
  }

  std::size_t N_;
  std::vector<double> coeff_;
  std::unique_ptr<fft::RealPlan> plan_;
  std::vector<std::complex<double>> symbol_;
};

namespace detail {
inline std::shared_ptr<const ToeplitzOperator> cached_operator(double (*t)(long), std::size_t N) {
  static std::mutex mutex;
  static std::map<std::pair<double (*)(long), std::size_t>, std::shared_ptr<const ToeplitzOperator>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{t, N}];
  if (!slot) slot = std::make_shared<const ToeplitzOperator>(t, N);
  return slot;
}
}  // namespace detail

/// Shared, read-only Hilbert operator on N nodes (grid-spacing independent).
inline std::shared_ptr<const ToeplitzOperator> hilbert_operator(std::size_t N) {
  return detail::cached_operator(&hilbert_coefficient, N);
}

/// Shared, read-only log-kernel operator with coefficients J(i - k).
inline std::shared_ptr<const ToeplitzOperator> log_kernel_operator(std::size_t N) {
  return detail::cached_operator(&log_kernel_coefficient, N);
}

}  // namespace liouville
