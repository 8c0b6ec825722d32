#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "liouville/error.hpp"

namespace liouville {

/// Symmetric uniform grid on [-L, L]: nodes x_j = j*h, j = -M..M, h = L/M.
///
/// Node x_0 = 0 is always present and x_{-j} = -x_j holds bit-exactly
/// because (-j)*h and -(j*h) round identically.
class Grid {
 public:
  Grid(double L, int M) : L_(L), M_(M) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid half-width L must be positive and finite");
    if (M < 1) throw ConfigError("grid must have M >= 1");
  }

  double L() const { return L_; }
  int M() const { return M_; }
  double h() const { return L_ / M_; }
  std::size_t size() const { return static_cast<std::size_t>(2 * M_ + 1); }

  /// Node coordinate for signed index j in [-M, M].
  double x(int j) const { return j * h(); }
  std::size_t index(int j) const { return static_cast<std::size_t>(j + M_); }

  std::vector<double> nodes() const {
    std::vector<double> out(size());
    for (int j = -M_; j <= M_; ++j) out[index(j)] = x(j);
    return out;
  }

  /// Trapezoid weights over [-L, L].
  std::vector<double> weights() const {
    std::vector<double> w(size(), h());
    w.front() = w.back() = 0.5 * h();
    return w;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.L_ == b.L_ && a.M_ == b.M_; }

 private:
  double L_;
  int M_;
};

enum class Parity { Even, Odd, None };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

inline Parity parity_from_string(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  if (s == "none") return Parity::None;
  throw ConfigError("unknown parity '" + s + "'");
}

/// Parity of a pointwise product.
inline Parity product_parity(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return a == b ? Parity::Even : Parity::Odd;
}

/// Parity after an operator that flips it (Hilbert transform, derivative).
inline Parity flipped(Parity p) {
  switch (p) {
    case Parity::Even: return Parity::Odd;
    case Parity::Odd: return Parity::Even;
    case Parity::None: return Parity::None;
  }
  return Parity::None;
}

/// Real samples on a Grid with a declared parity.
///
/// Construction validates finiteness and, for parity-tagged fields, exact
/// mirror symmetry of the samples.
class Field {
 public:
  Field(Grid grid, std::vector<double> values, Parity parity = Parity::None)
      : grid_(grid), values_(std::move(values)), parity_(parity) {
    if (values_.size() != grid_.size())
      throw DomainError("field has " + std::to_string(values_.size()) + " samples, grid has " +
                        std::to_string(grid_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw DomainError("field contains a non-finite sample");
    if (!parity_exact()) throw DomainError(std::string("field samples are not exactly ") + to_string(parity_));
  }

  /// Zero field.
  static Field zeros(Grid grid, Parity parity = Parity::Even) {
    return Field(grid, std::vector<double>(grid.size(), 0.0), parity);
  }

  /// Samples f(x_j). For parity-tagged fields f is evaluated on j >= 0 only and
  /// mirrored, so the tag holds by construction.
  static Field sample(Grid grid, const std::function<double(double)>& f, Parity parity = Parity::None) {
    std::vector<double> v(grid.size());
    const int M = grid.M();
    if (parity == Parity::None) {
      for (int j = -M; j <= M; ++j) v[grid.index(j)] = f(grid.x(j));
    } else {
      for (int j = 0; j <= M; ++j) v[grid.index(j)] = f(grid.x(j));
      mirror(grid, v, parity);
    }
    return Field(grid, std::move(v), parity);
  }

  /// Builds an even/odd field from its samples on j = 0..M.
  static Field from_half(Grid grid, std::span<const double> half, Parity parity) {
    if (half.size() != static_cast<std::size_t>(grid.M() + 1))
      throw DomainError("half-grid vector has wrong length");
    if (parity == Parity::None) throw DomainError("from_half needs an even or odd parity");
    std::vector<double> v(grid.size());
    std::copy(half.begin(), half.end(), v.begin() + grid.M());
    mirror(grid, v, parity);
    return Field(grid, std::move(v), parity);
  }

  /// Overwrites j < 0 from j > 0 according to the parity (odd also zeroes j = 0).
  static void mirror(const Grid& grid, std::vector<double>& v, Parity parity) {
    const int M = grid.M();
    if (parity == Parity::Even) {
      for (int j = 1; j <= M; ++j) v[grid.index(-j)] = v[grid.index(j)];
    } else if (parity == Parity::Odd) {
      v[grid.index(0)] = 0.0;
      for (int j = 1; j <= M; ++j) v[grid.index(-j)] = -v[grid.index(j)];
    }
  }

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(int j) const { return values_[grid_.index(j)]; }

  /// Samples on j = 0..M.
  std::vector<double> half() const {
    return std::vector<double>(values_.begin() + grid_.M(), values_.end());
  }

  /// f(-x).
  Field reflected() const {
    std::vector<double> v(values_.rbegin(), values_.rend());
    return Field(grid_, std::move(v), parity_);
  }

  bool parity_exact() const {
    const int M = grid_.M();
    if (parity_ == Parity::Even) {
      for (int j = 1; j <= M; ++j)
        if (at(j) != at(-j)) return false;
    } else if (parity_ == Parity::Odd) {
      if (at(0) != 0.0) return false;
      for (int j = 1; j <= M; ++j)
        if (at(-j) != -at(j)) return false;
    }
    return true;
  }

  /// Same samples, parity tag dropped.
  Field untagged() const { return Field(grid_, values_, Parity::None); }

 private:
  Grid grid_;
  std::vector<double> values_;
  Parity parity_;
};

/// Pointwise combinations with parity bookkeeping. Each output sample is the
/// same floating-point expression of the mirrored inputs, so exact parity
/// carries over.
inline Field multiply(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return Field(a.grid(), std::move(v), product_parity(a.parity(), b.parity()));
}

inline Field square(const Field& a) { return multiply(a, a); }

inline Field axpby(double alpha, const Field& a, double beta, const Field& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * a[i] + beta * b[i];
  const Parity p = a.parity() == b.parity() ? a.parity() : Parity::None;
  return Field(a.grid(), std::move(v), p);
}

inline Field operator-(const Field& a, const Field& b) { return axpby(1.0, a, -1.0, b); }
inline Field operator+(const Field& a, const Field& b) { return axpby(1.0, a, 1.0, b); }

inline Field scaled(double alpha, const Field& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * a[i];
  return Field(a.grid(), std::move(v), a.parity());
}

}  // namespace liouville
