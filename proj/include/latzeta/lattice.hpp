// Lattice enumeration and the direct-summation oracle for Epstein-type zetas.
#ifndef LATZETA_LATTICE_HPP
#define LATZETA_LATTICE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "latzeta/core.hpp"

namespace latzeta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IVec = std::vector<int>;

// Positive-definite quadratic form Q(x) = (1/2) x^T A x.
struct QuadraticFormSpec {
  Matrix A;

  int dim() const { return static_cast<int>(A.rows()); }

  void validate() const {
    int p = dim();
    if (p < 1 || p > 8) throw DomainError("QuadraticFormSpec: dimension must be in 1..8");
    if (A.cols() != p || !A.isApprox(A.transpose(), 0.0))
      throw DomainError("QuadraticFormSpec: matrix must be square and exactly symmetric");
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success)
      throw DomainError("QuadraticFormSpec: matrix must be positive definite");
  }

  double q_value(const Vector& x) const { return 0.5 * x.dot(A * x); }
  double det() const { return A.determinant(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

// Full argument set of zeta_{A,c,q}(s).
struct EpsteinParams {
  QuadraticFormSpec form;
  Vector offset;  // c
  double q = 0.0;

  void validate() const {
    form.validate();
    if (offset.size() != form.dim())
      throw DomainError("EpsteinParams: offset dimension mismatch");
    if (!(q >= 0.0)) throw DomainError("EpsteinParams: q must be >= 0");
  }
};

namespace detail {

template <class Fn>
void for_each_box_vector(int p, int radius, Fn&& fn) {
  IVec v(p, -radius);
  while (true) {
    fn(v);
    int i = 0;
    while (i < p && v[i] == radius) v[i++] = -radius;
    if (i == p) break;
    ++v[i];
  }
}

inline bool first_nonzero_positive(const IVec& v) {
  for (int x : v) {
    if (x > 0) return true;
    if (x < 0) return false;
  }
  return false;  // origin
}

inline int max_norm(const IVec& v) {
  int m = 0;
  for (int x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

// Vectors of Z^p \ {0} with max-norm == shell_index whose first non-zero
// component is positive: one representative per +-pair.
inline std::vector<IVec> enumerate_half_lattice(int p, int shell_index) {
  if (p < 1) throw DomainError("enumerate_half_lattice: p must be >= 1");
  std::vector<IVec> out;
  if (shell_index == 0) return out;
  detail::for_each_box_vector(p, shell_index, [&](const IVec& v) {
    if (detail::max_norm(v) != shell_index) return;
    if (detail::first_nonzero_positive(v)) out.push_back(v);
  });
  return out;
}

// Rigorous bound on the sum over max-norm > radius by integral comparison:
// each term is at most [lam_min/2 (r - |c|)^2 + q]^{-Re s}, shell r holds at
// most 2p (2r+1)^{p-1} points.
inline double lattice_tail_bound(const EpsteinParams& params, double re_s,
                                 int radius) {
  int p = params.form.dim();
  double lam = params.form.min_eigenvalue();
  double cnorm = params.offset.size() ? params.offset.norm() : 0.0;
  double tail = 0.0;
  for (int r = radius + 1; r < radius + 2'000'000; ++r) {
    double shifted = std::max(r - cnorm, 0.5);
    double base = 0.5 * lam * shifted * shifted + params.q;
    double count = 2.0 * p * std::pow(2.0 * r + 1.0, p - 1);
    double term = count * std::pow(base, -re_s);
    tail += term;
    if (term < 1e-4 * tail && term < 1e-30) break;
  }
  return tail;
}

// Brute-force oracle: sum over n in Z^p, max-norm <= radius, of
// [Q(n+c) + q]^{-s}.  Valid (and rigorous via the tail bound) for
// Re s well inside the convergence half-plane.
inline ZetaValue direct_lattice_sum(const EpsteinParams& params, Complex s,
                                    bool excludes_origin, int radius,
                                    const AccuracyTarget& acc = {}) {
  params.validate();
  int p = params.form.dim();
  if (s.real() <= 0.5 * p)
    throw ConvergenceError("direct_lattice_sum: Re s <= p/2, series diverges");

  // Per-shell accumulation in shell order: deterministic reduction.
  std::vector<Complex> shell_sums(radius + 1, Complex(0.0, 0.0));
  const Matrix& A = params.form.A;
  Vector x(p);
  bool singular = false;
  detail::for_each_box_vector(p, radius, [&](const IVec& v) {
    bool origin = true;
    for (int i = 0; i < p; ++i) {
      x[i] = v[i] + params.offset[i];
      if (v[i] != 0) origin = false;
    }
    if (origin && excludes_origin) return;
    double base = 0.5 * x.dot(A * x) + params.q;
    if (base <= 0.0) {
      singular = true;
      return;
    }
    shell_sums[detail::max_norm(v)] += std::exp(-s * std::log(base));
  });
  if (singular)
    throw SingularTermError("direct_lattice_sum: Q(n+c)+q = 0 for a retained term");

  // Stop once three consecutive shells are each below rel_tol of the
  // accumulated value; guards against cancellation plateaus.
  Complex total(0.0, 0.0);
  int small_streak = 0;
  int r_stop = radius;
  for (int r = 0; r <= radius; ++r) {
    total += shell_sums[r];
    if (r > 0 && std::abs(shell_sums[r]) < acc.rel_tol * std::abs(total))
      ++small_streak;
    else
      small_streak = 0;
    if (small_streak >= 3) {
      r_stop = r;
      break;
    }
  }
  ZetaValue out;
  out.value = total;
  out.err_estimate = lattice_tail_bound(params, s.real(), r_stop);
  return out;
}

}  // namespace latzeta

#endif  // LATZETA_LATTICE_HPP
