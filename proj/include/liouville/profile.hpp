#pragma once

// Prescribed Q-curvature profiles K and the Assumption (A) check.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "liouville/error.hpp"
#include "liouville/grid.hpp"

namespace liouville {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson) on [0, x_max].
///
/// The slope at x = 0 is pinned to zero so the even extension is C^1.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw ConfigError("tabulated profile needs at least two (x, K) rows");
    if (x_.front() != 0.0) throw ConfigError("tabulated profile must start at x = 0");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i])) throw ConfigError("tabulated x must be strictly ascending");
    for (double v : y_)
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tabulated K must be positive and finite");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (y_[i + 1] > y_[i]) throw ConfigError("tabulated K must be nonincreasing in |x|");

    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (s[i - 1] * s[i] <= 0.0) continue;
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
    if (n == 2) {
      d_[1] = s[0];
    } else {
      // three-point end slope, clipped to keep the last cell monotone
      const double h0 = h[n - 2], h1 = h[n - 3];
      double d = ((2.0 * h0 + h1) * s[n - 2] - h0 * s[n - 3]) / (h0 + h1);
      if (d * s[n - 2] <= 0.0) d = 0.0;
      else if (s[n - 2] * s[n - 3] <= 0.0 && std::abs(d) > 3.0 * std::abs(s[n - 2])) d = 3.0 * s[n - 2];
      d_[n - 1] = d;
    }
  }

  double x_max() const { return x_.back(); }

  double value(double t) const {
    const auto [i, u, hh] = locate(t);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * hh * d_[i] + (-2 * u3 + 3 * u2) * y_[i + 1] +
           (u3 - u2) * hh * d_[i + 1];
  }

  double derivative(double t) const {
    const auto [i, u, hh] = locate(t);
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * y_[i] + (-6 * u2 + 6 * u) * y_[i + 1]) / hh + (3 * u2 - 4 * u + 1) * d_[i] +
           (3 * u2 - 2 * u) * d_[i + 1];
  }

 private:
  struct Cell {
    std::size_t i;
    double u;
    double h;
  };

  Cell locate(double t) const {
    if (t < 0.0 || t > x_.back())
      throw ExtrapolationError("tabulated profile queried at |x| = " + std::to_string(t) + " outside [0, " +
                               std::to_string(x_.back()) + "]");
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double hh = x_[i + 1] - x_[i];
    return {i, (t - x_[i]) / hh, hh};
  }

  std::vector<double> x_, y_, d_;
};

enum class ProfileKind { Gaussian, Power, Constant, Tabulated };

/// An immutable curvature profile K.
///
/// Every evaluation goes through |x| (or x^2), so K, sqrt(K) and log K are
/// bit-identical at +/-x and the derivatives are exactly odd.
class CurvatureProfile {
 public:
  static CurvatureProfile gaussian() { return CurvatureProfile(Gaussian{}); }

  /// K(x) = (1+x^2)^{-(1+2 delta)/2}, i.e. sqrt(K) = <x>^{-1/2-delta}.
  static CurvatureProfile power(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("power profile needs delta > 0");
    return CurvatureProfile(Power{delta});
  }

  static CurvatureProfile constant(double c = 1.0) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("constant profile needs c > 0");
    return CurvatureProfile(Constant{c});
  }

  /// Samples (x, K) with x >= 0 ascending from 0. Rows with x < 0 are accepted
  /// only if they mirror a row with x > 0 and are then dropped.
  static CurvatureProfile tabulated(std::vector<double> x, std::vector<double> K) {
    if (x.size() != K.size()) throw ConfigError("tabulated x and K differ in length");
    std::vector<double> xp, kp;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= 0.0) {
        xp.push_back(x[i]);
        kp.push_back(K[i]);
      }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= 0.0) continue;
      auto it = std::find(xp.begin(), xp.end(), -x[i]);
      if (it == xp.end() || kp[static_cast<std::size_t>(it - xp.begin())] != K[i])
        throw ConfigError("tabulated profile is not even");
    }
    return CurvatureProfile(Tabulated{std::make_shared<const MonotoneCubic>(std::move(xp), std::move(kp))});
  }

  /// Two-column CSV (x, K), optional header line, sorted ascending in x.
  static CurvatureProfile load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile table '" + path + "'");
    std::vector<double> x, K;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double a = 0.0, b = 0.0;
      if (!(ss >> a >> b)) {
        if (first) {
          first = false;
          continue;  // header
        }
        throw ConfigError("malformed row in profile table: '" + line + "'");
      }
      first = false;
      x.push_back(a);
      K.push_back(b);
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (!(x[i + 1] > x[i])) throw ConfigError("profile table must be sorted ascending in x");
    return tabulated(std::move(x), std::move(K));
  }

  ProfileKind kind() const {
    return std::visit([](const auto& p) { return p.kind; }, impl_);
  }

  std::string name() const {
    switch (kind()) {
      case ProfileKind::Gaussian: return "gaussian";
      case ProfileKind::Power: return "power";
      case ProfileKind::Constant: return "constant";
      case ProfileKind::Tabulated: return "tabulated";
    }
    return "unknown";
  }

  /// Parameter of the Power kind, or the constant value for Constant.
  double parameter() const {
    if (auto* p = std::get_if<Power>(&impl_)) return p->delta;
    if (auto* c = std::get_if<Constant>(&impl_)) return c->c;
    return 0.0;
  }

  /// Analytically known Assumption (A) exponent, if any.
  std::optional<double> assumed_delta() const {
    if (std::holds_alternative<Gaussian>(impl_)) return 0.5;
    if (auto* p = std::get_if<Power>(&impl_)) return p->delta;
    return std::nullopt;
  }

  /// Analytically known Assumption (A) constant, if any. For the power kind
  /// sqrt(K) + |x d sqrt(K)| = <x>^{-1/2-d} (1 + (1/2+d) x^2/(1+x^2)) < (3/2+d) <x>^{-1/2-d}.
  /// For the Gaussian at delta = 1/2 the sup is 3 sqrt(3)/e < 2.
  std::optional<double> assumed_C() const {
    if (std::holds_alternative<Gaussian>(impl_)) return 2.0;
    if (auto* p = std::get_if<Power>(&impl_)) return 1.5 + p->delta;
    return std::nullopt;
  }

  /// Constant K is admitted as the exact-oracle case although it violates (A).
  bool violates_assumption_A() const { return std::holds_alternative<Constant>(impl_); }

  double K(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return std::exp(-(x * x));
          else if constexpr (std::is_same_v<T, Power>) return std::pow(1.0 + x * x, -(0.5 + p.delta));
          else if constexpr (std::is_same_v<T, Constant>) return p.c;
          else return p.table->value(std::abs(x));
        },
        impl_);
  }

  double sqrtK(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return std::exp(-0.5 * (x * x));
          else if constexpr (std::is_same_v<T, Power>) return std::pow(1.0 + x * x, -(0.25 + 0.5 * p.delta));
          else if constexpr (std::is_same_v<T, Constant>) return std::sqrt(p.c);
          else return std::sqrt(p.table->value(std::abs(x)));
        },
        impl_);
  }

  double logK(double x) const {
    return std::visit(
        [x](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return -(x * x);
          else if constexpr (std::is_same_v<T, Power>) return -(0.5 + p.delta) * std::log1p(x * x);
          else if constexpr (std::is_same_v<T, Constant>) return std::log(p.c);
          else return std::log(p.table->value(std::abs(x)));
        },
        impl_);
  }

  /// d/dx sqrt(K), odd.
  double dsqrtK(double x) const {
    const double a = std::abs(x);
    const double d = std::visit(
        [a](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return -a * std::exp(-0.5 * (a * a));
          else if constexpr (std::is_same_v<T, Power>) {
            const double q = 0.25 + 0.5 * p.delta;
            return -2.0 * q * a * std::pow(1.0 + a * a, -q - 1.0);
          } else if constexpr (std::is_same_v<T, Constant>) return 0.0;
          else return p.table->derivative(a) / (2.0 * std::sqrt(p.table->value(a)));
        },
        impl_);
    return x < 0.0 ? -d : d;
  }

  /// d/dx K, odd; equals 2 sqrt(K) dsqrt(K) to round-off.
  double dK(double x) const {
    const double a = std::abs(x);
    const double d = std::visit(
        [a](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return -2.0 * a * std::exp(-(a * a));
          else if constexpr (std::is_same_v<T, Power>) {
            const double q = 0.5 + p.delta;
            return -2.0 * q * a * std::pow(1.0 + a * a, -q - 1.0);
          } else if constexpr (std::is_same_v<T, Constant>) return 0.0;
          else return p.table->derivative(a);
        },
        impl_);
    return x < 0.0 ? -d : d;
  }

  /// d/dx log K = K'/K, odd. Finite where K underflows.
  double dlogK(double x) const {
    const double a = std::abs(x);
    const double d = std::visit(
        [a](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Gaussian>) return -2.0 * a;
          else if constexpr (std::is_same_v<T, Power>) return -(1.0 + 2.0 * p.delta) * a / (1.0 + a * a);
          else if constexpr (std::is_same_v<T, Constant>) return 0.0;
          else return p.table->derivative(a) / p.table->value(a);
        },
        impl_);
    return x < 0.0 ? -d : d;
  }

  /// External potential W = -d/dx log sqrt(K).
  double W(double x) const { return -0.5 * dlogK(x); }

  /// Largest |x| at which the profile can be evaluated.
  double support_limit() const {
    if (auto* t = std::get_if<Tabulated>(&impl_)) return t->table->x_max();
    return INFINITY;
  }

  /// sqrt(K) sampled on a grid as an even field.
  Field sqrtK_field(const Grid& grid) const {
    return Field::sample(grid, [this](double x) { return sqrtK(x); }, Parity::Even);
  }

 private:
  struct Gaussian {
    static constexpr ProfileKind kind = ProfileKind::Gaussian;
  };
  struct Power {
    static constexpr ProfileKind kind = ProfileKind::Power;
    double delta;
  };
  struct Constant {
    static constexpr ProfileKind kind = ProfileKind::Constant;
    double c;
  };
  struct Tabulated {
    static constexpr ProfileKind kind = ProfileKind::Tabulated;
    std::shared_ptr<const MonotoneCubic> table;
  };
  using Impl = std::variant<Gaussian, Power, Constant, Tabulated>;

  explicit CurvatureProfile(Impl impl) : impl_(std::move(impl)) {}

  Impl impl_;
};

struct AssumptionReport {
  bool pass = false;
  double worst_ratio = 0.0;  ///< max over nodes of (sqrtK + |x dsqrtK|) / (C <x>^{-1/2-delta})
  double worst_x = 0.0;
  bool even = true;
  bool positive = true;  ///< log K finite at every node
  bool monotone = true;  ///< K nonincreasing in |x| on the nodes
};

/// Evaluates Assumption (A) on the grid nodes. Failures are reported, never thrown
/// (except for a tabulated profile queried beyond its table).
inline AssumptionReport check_assumption_A(const CurvatureProfile& K, const Grid& grid, double C, double delta) {
  if (!(C > 0.0) || !(delta > 0.0)) throw ConfigError("Assumption (A) check needs C > 0 and delta > 0");
  AssumptionReport r;
  double prev_log = INFINITY;
  for (int j = 0; j <= grid.M(); ++j) {
    const double x = grid.x(j);
    const double lk = K.logK(x);
    if (!std::isfinite(lk)) r.positive = false;
    if (K.K(x) != K.K(-x) || K.dsqrtK(x) != -K.dsqrtK(-x)) r.even = false;
    if (lk > prev_log) r.monotone = false;
    prev_log = lk;
    const double bound = C * std::pow(1.0 + x * x, -0.5 * (0.5 + delta));
    const double ratio = (K.sqrtK(x) + std::abs(x * K.dsqrtK(x))) / bound;
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_x = x;
    }
  }
  r.pass = r.worst_ratio <= 1.0 && r.even && r.positive && r.monotone;
  return r;
}

}  // namespace liouville
