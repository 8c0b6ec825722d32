#pragma once

// Matrix-free Krylov solvers and dense singular-value helpers.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "liouville/error.hpp"

namespace liouville::linalg {

using Vec = Eigen::VectorXd;
using LinearMap = std::function<Vec(const Vec&)>;

struct GmresResult {
  Vec x;
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Restarted GMRES(m) for A x = b from x0 = 0.
inline GmresResult gmres(const LinearMap& A, const Vec& b, double rel_tol, int max_iter, int restart = 60) {
  const Eigen::Index n = b.size();
  GmresResult out;
  out.x = Vec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  const int m = std::max(1, std::min<int>(restart, static_cast<int>(n)));
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Vec cs(m), sn(m), g(m + 1);

  while (out.iterations < max_iter) {
    Vec r = b - A(out.x);
    double beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= rel_tol) {
      out.converged = true;
      return out;
    }
    V.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    H.setZero();
    int k = 0;
    for (; k < m && out.iterations < max_iter; ++k) {
      ++out.iterations;
      Vec w = A(V.col(k));
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      // second pass keeps the basis orthogonal when A is close to the identity
      for (int i = 0; i <= k; ++i) {
        const double c = V.col(i).dot(w);
        H(i, k) += c;
        w -= c * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
        H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
        H(i, k) = t;
      }
      const double rr = std::hypot(H(k, k), H(k + 1, k));
      cs(k) = rr == 0.0 ? 1.0 : H(k, k) / rr;
      sn(k) = rr == 0.0 ? 0.0 : H(k + 1, k) / rr;
      H(k, k) = rr;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      out.relative_residual = std::abs(g(k + 1)) / bnorm;
      if (out.relative_residual <= rel_tol || H(k, k) == 0.0) {
        ++k;
        break;
      }
    }
    const Vec y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    out.x += V.leftCols(k) * y;
    if (!out.x.allFinite()) throw NumericalError("GMRES produced a non-finite iterate");
  }
  const Vec r = b - A(out.x);
  out.relative_residual = r.norm() / bnorm;
  out.converged = out.relative_residual <= rel_tol;
  return out;
}

struct LanczosResult {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Extreme singular values of B from Lanczos with full reorthogonalization on
/// B^T B. The start vector is drawn from a seeded generator.
inline LanczosResult lanczos_singular_extremes(const LinearMap& B, const LinearMap& Bt, Eigen::Index n,
                                               std::uint64_t seed = 20240601, int max_iter = 200,
                                               double rel_tol = 1e-10) {
  LanczosResult res;
  if (n == 0) return res;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vec q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = normal(rng);
  q.normalize();

  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  Eigen::MatrixXd Q(n, kmax);
  std::vector<double> alpha, beta;
  double prev = NAN;
  for (int k = 0; k < kmax; ++k) {
    Q.col(k) = q;
    Vec w = Bt(B(q));
    const double a = q.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
    const double b = w.norm();
    res.iterations = k + 1;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      T(i, i) = alpha[i];
      if (i < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double lo = std::max(es.eigenvalues()(0), 0.0);
    const double hi = std::max(es.eigenvalues()(k), 0.0);
    res.sigma_min = std::sqrt(lo);
    res.sigma_max = std::sqrt(hi);
    // residual bound of the lowest Ritz pair
    const double resid = b * std::abs(es.eigenvectors()(k, 0));
    if (k + 1 == n || b <= 1e-300 || (resid <= rel_tol * std::max(hi, 1e-300) && std::abs(lo - prev) <= rel_tol * hi)) {
      res.converged = true;
      break;
    }
    prev = lo;
    beta.push_back(b);
    q = w / b;
  }
  return res;
}

/// Smallest singular value by dense bidiagonal divide-and-conquer SVD.
inline double sigma_min_dense(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues().minCoeff();
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues();
}

/// Smallest singular value of a square matrix by inverse iteration on (A^T A)^{-1}
/// with one LU factorization.
inline double sigma_min_inverse_iteration(const Eigen::MatrixXd& A, int iters = 200, double rel_tol = 1e-12) {
  const Eigen::Index n = A.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Vec x = Vec::Ones(n).normalized();
  double est = 0.0;
  for (int k = 0; k < iters; ++k) {
    // solve A^T A y = x as A^T z = x, A y = z
    const Vec z = lu.transpose().solve(x);
    const Vec y = lu.solve(z);
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) return 0.0;
    const double next = 1.0 / std::sqrt(ny);
    x = y / ny;
    if (k > 0 && std::abs(next - est) <= rel_tol * next) return next;
    est = next;
  }
  return est;
}

}  // namespace liouville::linalg
