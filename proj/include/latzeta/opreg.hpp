// Finite-dimensional verification of the operator-regularization identities:
// n-th epsilon-derivatives of H^{-eps-m} with arbitrary inert constants.
#ifndef LATZETA_OPREG_HPP
#define LATZETA_OPREG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "latzeta/core.hpp"
#include "latzeta/lattice.hpp"

namespace latzeta {

struct ORProblem {
  Matrix H;
  int m = 1;            // power
  int n = 1;            // loop order
  Vector alphas;        // alpha_1 .. alpha_n (arbitrary, provably inert)

  void validate() const {
    int N = static_cast<int>(H.rows());
    if (N < 1 || N > 64 || H.cols() != N)
      throw DomainError("ORProblem: H must be square, N <= 64");
    if (!H.isApprox(H.transpose(), 1e-12))
      throw DomainError("ORProblem: H must be symmetric");
    if (m < 1 || n < 1) throw DomainError("ORProblem: need m >= 1, n >= 1");
    if (alphas.size() != n) throw DomainError("ORProblem: need n alpha values");
  }
};

// Cached eigendecomposition of a symmetric positive-definite matrix.
struct MatrixFunctionCache {
  Vector eigenvalues;
  Matrix eigenvectors;

  explicit MatrixFunctionCache(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success)
      throw DomainError("MatrixFunctionCache: eigendecomposition failed");
    eigenvalues = es.eigenvalues();
    eigenvectors = es.eigenvectors();
    if (eigenvalues.minCoeff() <= 0.0)
      throw DomainError("MatrixFunctionCache: H must be positive definite");
    double recon =
        (eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose() - H)
            .norm();
    if (recon > 1e-12 * std::max(1.0, H.norm()))
      throw DomainError("MatrixFunctionCache: reconstruction tolerance exceeded");
  }

  // H^t for real exponent t.
  Matrix power(double t) const {
    Vector d = eigenvalues.array().pow(t).matrix();
    return eigenvectors * d.asDiagonal() * eigenvectors.transpose();
  }

  Matrix log() const {
    Vector d = eigenvalues.array().log().matrix();
    return eigenvectors * d.asDiagonal() * eigenvectors.transpose();
  }
};

namespace detail {

// Central finite-difference weights for the n-th derivative at 0 on the
// symmetric grid {-k..k} h, solved from the Vandermonde moment conditions.
inline std::vector<double> stencil_weights(int n, int k) {
  int P = 2 * k + 1;
  if (P < n + 2) throw DomainError("stencil_weights: too few points");
  Matrix V(P, P);
  Vector rhs = Vector::Zero(P);
  for (int j = 0; j < P; ++j)
    for (int i = 0; i < P; ++i) V(j, i) = std::pow(static_cast<double>(i - k), j);
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  rhs[n] = nfact;
  Vector w = V.fullPivLu().solve(rhs);
  std::vector<double> out(P);
  for (int i = 0; i < P; ++i) out[i] = w[i];
  return out;
}

// n-th derivative at 0 of a matrix-valued function, one step size.
inline Matrix matrix_nth_derivative(const std::function<Matrix(double)>& f,
                                    int n, double h) {
  int k = (n + 1) / 2 + 1;
  std::vector<double> w = stencil_weights(n, k);
  Matrix acc;
  for (int i = -k; i <= k; ++i) {
    Matrix fi = f(i * h);
    Matrix contrib = w[i + k] * fi;
    acc = (acc.size() == 0) ? contrib : Matrix(acc + contrib);
  }
  return acc / std::pow(h, n);
}

struct DerivResult {
  Matrix value;
  double extrapolation_err = 0.0;
};

// Two-level Richardson over h and h/2 (central stencils: O(h^2) error).
inline DerivResult richardson_derivative(const std::function<Matrix(double)>& f,
                                         int n, double h) {
  Matrix d1 = matrix_nth_derivative(f, n, h);
  Matrix d2 = matrix_nth_derivative(f, n, 0.5 * h);
  DerivResult out;
  out.value = (4.0 * d2 - d1) / 3.0;
  out.extrapolation_err = (d2 - d1).norm() / 3.0;
  return out;
}

inline void check_eps_step(double eps_step) {
  if (!(eps_step >= 1e-4 && eps_step <= 1e-1))
    throw DomainError("eps_step must be in [1e-4, 1e-1]");
}

}  // namespace detail

struct ORResult {
  Matrix value;
  double extrapolation_err = 0.0;
};

// Regularized power:
//   H^{-m} = lim_{eps->0} d^n/deps^n [(1 + alpha_1 eps + ... + alpha_n eps^n)
//                                      (eps^n/n!) H^{-eps-m}].
inline ORResult or_regularized_power(const ORProblem& prob, double eps_step) {
  prob.validate();
  detail::check_eps_step(eps_step);
  MatrixFunctionCache cache(prob.H);
  double nfact = 1.0;
  for (int i = 2; i <= prob.n; ++i) nfact *= i;
  auto f = [&](double eps) {
    double poly = 1.0;
    double ep = 1.0;
    for (int i = 0; i < prob.n; ++i) {
      ep *= eps;
      poly += prob.alphas[i] * ep;
    }
    return Matrix(poly * ep / nfact * cache.power(-eps - prob.m));
  };
  detail::DerivResult d = detail::richardson_derivative(f, prob.n, eps_step);
  Matrix oracle = cache.power(-static_cast<double>(prob.m));
  if (d.extrapolation_err > 1e-6 * oracle.norm())
    throw ConvergenceError("or_regularized_power: stencil instability");
  return {d.value, d.extrapolation_err};
}

// Multi-power generalization with a shared operator:
//   product H^{-eps-m_1} ... H^{-eps-m_r} under the same n-th derivative.
inline ORResult or_multi_power(const Matrix& H, const std::vector<int>& ms,
                               int n, const Vector& alphas, double eps_step) {
  if (ms.empty()) throw DomainError("or_multi_power: need at least one power");
  int total = 0;
  for (int mi : ms) {
    if (mi < 1) throw DomainError("or_multi_power: all m_i must be >= 1");
    total += mi;
  }
  ORProblem prob{H, 1, n, alphas};
  prob.validate();
  detail::check_eps_step(eps_step);
  MatrixFunctionCache cache(H);
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  int r = static_cast<int>(ms.size());
  auto f = [&](double eps) {
    double poly = 1.0;
    double ep = 1.0;
    for (int i = 0; i < n; ++i) {
      ep *= eps;
      poly += alphas[i] * ep;
    }
    return Matrix(poly * ep / nfact * cache.power(-r * eps - total));
  };
  detail::DerivResult d = detail::richardson_derivative(f, n, eps_step);
  Matrix oracle = cache.power(-static_cast<double>(total));
  if (d.extrapolation_err > 1e-6 * oracle.norm())
    throw ConvergenceError("or_multi_power: stencil instability");
  return {d.value, d.extrapolation_err};
}

// Schwinger form: ln H = -lim d^n/deps^n [(eps^{n-1}/n!) H^{-eps}].
inline ORResult schwinger_log(const Matrix& H, int n, double eps_step) {
  if (n < 1) throw DomainError("schwinger_log: n must be >= 1");
  detail::check_eps_step(eps_step);
  MatrixFunctionCache cache(H);
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  auto f = [&](double eps) {
    return Matrix(std::pow(eps, n - 1) / nfact * cache.power(-eps));
  };
  detail::DerivResult d = detail::richardson_derivative(f, n, eps_step);
  ORResult out{Matrix(-d.value), d.extrapolation_err};
  if (out.extrapolation_err > 1e-6 * std::max(1.0, cache.log().norm()))
    throw ConvergenceError("schwinger_log: stencil instability");
  return out;
}

// Derivative bridge on diagonal H: lhs = H^{-m} directly, rhs applies
// h^{-m} = ((-1)^{m-1}/(m-1)!) d^m/dh^m ln h eigenvalue-wise with m-th
// central differences plus Richardson.
inline std::pair<Matrix, Matrix> feynman_schwinger_bridge(const Matrix& H,
                                                          int m,
                                                          double rel_step = 1e-2) {
  int N = static_cast<int>(H.rows());
  if (m < 1) throw DomainError("feynman_schwinger_bridge: m must be >= 1");
  if (!H.isApprox(Matrix(H.diagonal().asDiagonal()), 1e-14))
    throw DomainError("feynman_schwinger_bridge: H must be diagonal");
  Matrix lhs = Matrix::Zero(N, N);
  Matrix rhs = Matrix::Zero(N, N);
  double sign = (m % 2 == 1) ? 1.0 : -1.0;
  double mfact = 1.0;
  for (int i = 2; i < m; ++i) mfact *= i;
  for (int i = 0; i < N; ++i) {
    double lam = H(i, i);
    if (!(lam > 0.0))
      throw DomainError("feynman_schwinger_bridge: H must be positive definite");
    lhs(i, i) = std::pow(lam, -m);
    auto f = [&](double eps) {
      return Matrix(Matrix::Constant(1, 1, std::log(lam + eps)));
    };
    detail::DerivResult d = detail::richardson_derivative(f, m, rel_step * lam);
    rhs(i, i) = sign / mfact * d.value(0, 0);
  }
  return {lhs, rhs};
}

// Laurent coefficients in eps of tr[(eps^n/n!) H^{-eps-m}] on the symmetric
// sample grid: in finite dimension all coefficients with k < 0 vanish
// identically (no genuine poles arise).
inline std::vector<double> or_laurent_report(const Matrix& H, int m, int n,
                                             double eps_step = 0.05) {
  MatrixFunctionCache cache(H);
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  auto g = [&](double eps) {
    return std::pow(eps, n) / nfact * cache.power(-eps - m).trace();
  };
  // Fit sum_{k=-n}^{n+1} c_k eps^k through 2(n+1) symmetric samples.
  int K = 2 * (n + 1);
  Matrix V(K, K);
  Vector rhs(K);
  int row = 0;
  for (int j = 1; j <= n + 1; ++j) {
    for (double sgn : {-1.0, 1.0}) {
      double eps = sgn * j * eps_step;
      for (int k = -n; k <= n + 1; ++k) V(row, k + n) = std::pow(eps, k);
      rhs[row] = g(eps);
      ++row;
    }
  }
  Vector c = V.fullPivLu().solve(rhs);
  std::vector<double> out(K);
  for (int k = 0; k < K; ++k) out[k] = c[k];  // out[k] is c_{k-n}
  return out;
}

}  // namespace latzeta

#endif  // LATZETA_OPREG_HPP
