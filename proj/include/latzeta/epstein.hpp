// Analytic continuation of inhomogeneous and homogeneous Epstein zeta
// functions by exponentially convergent Bessel-series representations.
#ifndef LATZETA_EPSTEIN_HPP
#define LATZETA_EPSTEIN_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "latzeta/lattice.hpp"
#include "latzeta/specfun.hpp"

namespace latzeta {

namespace detail {

// Entire reciprocal 1/Gamma(s).
inline Complex rgamma(Complex s) {
  if (s.real() > 0.5) return 1.0 / complex_gamma(s);
  return std::sin(kPi * s) * complex_gamma(1.0 - s) / kPi;
}

// Gamma(z) stable arbitrarily close to (but not on) its poles: shift the
// argument right by recurrence so the pole factor is divided out explicitly.
inline Complex gamma_deflated(Complex z) {
  if (z.real() > 0.5) return complex_gamma(z);
  int shift = static_cast<int>(std::ceil(0.5 - z.real())) + 1;
  Complex prod(1.0, 0.0);
  for (int i = 0; i < shift; ++i) prod *= (z + static_cast<double>(i));
  return complex_gamma(z + static_cast<double>(shift)) / prod;
}

// Gamma(s - p/2) / Gamma(s).  For p even this is the finite product
// 1/[(s-1)...(s-p/2)]; for p odd the deflated quotient.
inline Complex gamma_ratio_shift(Complex s, int p) {
  if (p % 2 == 0) {
    Complex prod(1.0, 0.0);
    for (int i = 1; i <= p / 2; ++i) prod *= (s - static_cast<double>(i));
    return 1.0 / prod;
  }
  return gamma_deflated(s - 0.5 * p) * rgamma(s);
}

// Residue of the continued zeta_{A,c,q} at the ladder point s = p/2 - k.
inline Complex inhomogeneous_residue(const EpsteinParams& params, int k) {
  int p = params.form.dim();
  double s0 = 0.5 * p - k;
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  double num = std::pow(2.0 * kPi, 0.5 * p) * std::pow(params.q, k) * sign;
  double den = std::exp(std::lgamma(k + 1.0)) * std::sqrt(params.form.det());
  return num / den * rgamma(Complex(s0, 0.0));
}

}  // namespace detail

// The p -> p-1 reduction used by the massless recurrence: first diagonal
// entry, doubled first column, and the Schur complement of a11.
struct RecurrenceDecomposition {
  double a = 0.0;        // A(0,0)
  Vector b;              // 2 * A(1.., 0)
  Matrix A_reduced;      // A(1.., 1..)
  Matrix Delta_reduced;  // A_reduced - b b^T / (4 a)
};

inline RecurrenceDecomposition decompose_first_axis(const QuadraticFormSpec& form) {
  form.validate();
  int p = form.dim();
  if (p < 2) throw DomainError("decompose_first_axis: need p >= 2");
  RecurrenceDecomposition d;
  d.a = form.A(0, 0);
  d.b = 2.0 * form.A.block(1, 0, p - 1, 1);
  d.A_reduced = form.A.block(1, 1, p - 1, p - 1);
  d.Delta_reduced = d.A_reduced - d.b * d.b.transpose() / (4.0 * d.a);
  return d;
}

namespace detail {

struct ShellSeries {
  Complex sum{0.0, 0.0};
  double err = 0.0;
  int shells = 0;
};

// Sum f over half-lattice shells until three consecutive shells fall below
// rel_tol of the accumulated magnitude.
template <class TermFn>
ShellSeries sum_half_lattice_shells(int p, TermFn&& term_of_vector,
                                    const AccuracyTarget& acc) {
  ShellSeries out;
  int streak = 0;
  long terms = 0;
  double last_shell_mag = 0.0;
  for (int r = 1;; ++r) {
    Complex shell(0.0, 0.0);
    for (const IVec& m : enumerate_half_lattice(p, r)) {
      shell += term_of_vector(m);
      ++terms;
    }
    out.sum += shell;
    out.shells = r;
    last_shell_mag = std::abs(shell);
    double ref = std::max(std::abs(out.sum), acc.abs_floor);
    if (last_shell_mag < acc.rel_tol * ref)
      ++streak;
    else
      streak = 0;
    if (streak >= 3) break;
    if (terms > acc.max_terms)
      throw ConvergenceError("half-lattice shell series: max_terms exhausted");
  }
  out.err = last_shell_mag;
  return out;
}

}  // namespace detail

// Nonlocal (half-lattice Bessel) part of the inhomogeneous continuation;
// entire in s, exponentially small for large q.  This is the piece that
// survives heat-kernel renormalization of the vacuum energy.
inline ZetaValue epstein_inhomogeneous_nonlocal(const EpsteinParams& params,
                                                Complex s,
                                                const AccuracyTarget& acc = {}) {
  params.validate();
  acc.validate();
  if (!(params.q > 0.0))
    throw DomainError("epstein_inhomogeneous_nonlocal: q must be > 0");
  int p = params.form.dim();
  double q = params.q;
  double sqdet = std::sqrt(params.form.det());

  Matrix Ainv = params.form.A.inverse();
  Complex coef = std::pow(2.0, 0.5 * s + 0.25 * p + 2.0) * std::pow(kPi, s) *
                 std::pow(q, -0.5 * s + 0.25 * p) / sqdet * detail::rgamma(s);
  double bessel_err = 0.0;
  Complex nu = 0.5 * p - s;
  auto term = [&](const IVec& m) -> Complex {
    double quad = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) quad += m[i] * Ainv(i, j) * m[j];
    double x = 2.0 * kPi * std::sqrt(2.0 * q * quad);
    if (x > 700.0) return Complex(0.0, 0.0);
    double phase = 0.0;
    for (int i = 0; i < p; ++i) phase += m[i] * params.offset[i];
    double kerr = 0.0;
    Complex kv = bessel_k(nu, x, acc, &kerr);
    bessel_err += kerr;
    return std::cos(2.0 * kPi * phase) *
           std::exp((0.5 * s - 0.25 * p) * std::log(quad)) * kv;
  };
  detail::ShellSeries series = detail::sum_half_lattice_shells(p, term, acc);
  ZetaValue out;
  out.value = coef * series.sum;
  out.err_estimate = std::abs(coef) * (series.err + bessel_err) +
                     1e-15 * std::abs(out.value);
  return out;
}

// Number of half-lattice shells the Bessel series needed; exposes the
// exponential-convergence behaviour (shell count grows ~ like sqrt(1/q)).
inline int epstein_shell_count(const EpsteinParams& params, Complex s,
                               const AccuracyTarget& acc = {}) {
  params.validate();
  acc.validate();
  int p = params.form.dim();
  double q = params.q;
  Matrix Ainv = params.form.A.inverse();
  Complex nu = 0.5 * p - s;
  auto term = [&](const IVec& m) -> Complex {
    double quad = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) quad += m[i] * Ainv(i, j) * m[j];
    double x = 2.0 * kPi * std::sqrt(2.0 * q * quad);
    if (x > 700.0) return Complex(0.0, 0.0);
    double phase = 0.0;
    for (int i = 0; i < p; ++i) phase += m[i] * params.offset[i];
    return std::cos(2.0 * kPi * phase) *
           std::exp((0.5 * s - 0.25 * p) * std::log(quad)) *
           bessel_k(nu, x, acc, nullptr);
  };
  return detail::sum_half_lattice_shells(p, term, acc).shells;
}

// Inhomogeneous Epstein zeta zeta_{A,c,q}(s), q > 0, continued to the whole
// plane by the Bessel representation.  Default convention excludes the n = 0
// term (the primed sum); include_origin = true adds [Q(c)+q]^{-s} back.
inline ZetaValue epstein_inhomogeneous(const EpsteinParams& params, Complex s,
                                       const AccuracyTarget& acc = {},
                                       bool include_origin = false) {
  params.validate();
  acc.validate();
  if (!(params.q > 0.0))
    throw DomainError(
        "epstein_inhomogeneous: q must be > 0 (use epstein_massless_recursive)");
  int p = params.form.dim();

  // Pole ladder: s = p/2 - k, skipping non-positive integers for p even.
  auto on_ladder = [&](Complex sc, int* k_out) {
    double target = 0.5 * p - sc.real();
    double kr = std::round(target);
    if (kr < 0.0) return false;
    if (p % 2 == 0 && 0.5 * p - kr <= 0.5) return false;  // cancelled by 1/Gamma(s)
    *k_out = static_cast<int>(kr);
    return std::abs(sc - Complex(0.5 * p - kr, 0.0)) < 1e-12;
  };
  int kpole = 0;
  if (on_ladder(s, &kpole)) {
    Complex loc(0.5 * p - kpole, 0.0);
    throw PoleError("epstein_inhomogeneous: pole on the s = p/2 - k ladder", loc,
                    detail::inhomogeneous_residue(params, kpole));
  }

  // Small q with s inside the convergence half-plane: the Bessel
  // representation suffers catastrophic cancellation against the q^{-s}
  // origin term, while the defining sum converges directly.  Sum it.
  if (params.q <= 0.05 && s.real() >= 0.5 * p + 1.0) {
    // magnitude scale: the first shell contributes ~2p terms near lambda_min
    double target =
        acc.rel_tol * 2.0 * p *
        std::pow(0.5 * params.form.min_eigenvalue() + params.q, -s.real());
    int radius = 64;
    while (radius < 65536 &&
           lattice_tail_bound(params, s.real(), radius) > target)
      radius *= 2;
    ZetaValue direct = direct_lattice_sum(params, s, true, radius, acc);
    if (include_origin) {
      double base = params.form.q_value(params.offset) + params.q;
      if (base <= 0.0)
        throw SingularTermError("epstein_inhomogeneous: singular origin term");
      direct.value += std::exp(-s * std::log(base));
    }
    return direct;
  }

  double sqdet = std::sqrt(params.form.det());
  double q = params.q;

  Complex local = std::pow(2.0 * kPi, 0.5 * p) * std::pow(q, Complex(0.5 * p, 0.0) - s) /
                  sqdet * detail::gamma_ratio_shift(s, p);
  ZetaValue nonlocal = epstein_inhomogeneous_nonlocal(params, s, acc);

  // local + nonlocal represents the full origin-included sum; the primed
  // (default) convention removes the n = 0 term [Q(c)+q]^{-s}.
  ZetaValue out;
  out.value = local + nonlocal.value;
  out.err_estimate = nonlocal.err_estimate + 1e-15 * std::abs(out.value);
  if (!include_origin) {
    double base = params.form.q_value(params.offset) + q;
    if (base <= 0.0)
      throw SingularTermError("epstein_inhomogeneous: singular origin term");
    out.value -= std::exp(-s * std::log(base));
  }
  // Nearest-pole bookkeeping.
  double target = std::max(0.0, std::round(0.5 * p - s.real()));
  int kn = static_cast<int>(target);
  if (!(p % 2 == 0 && 0.5 * p - kn <= 0.5)) {
    Complex loc(0.5 * p - kn, 0.0);
    double dist = std::abs(s - loc);
    if (dist < 0.01)
      out.nearest_pole =
          PoleInfo{loc, detail::inhomogeneous_residue(params, kn), dist};
  }
  return out;
}

// 1-D inhomogeneous zeta: 2 sum_{n>=1} (a n^2 + q)^{-s}, continued via
//   -q^{-s} + sqrt(pi/a) Gamma(s-1/2)/Gamma(s) q^{1/2-s} + Bessel series.
// (The direct-sum oracle fixes the sign of the q^{-s} term.)
inline ZetaValue eval_1d_inhomogeneous(double a, double q, Complex s,
                                       const AccuracyTarget& acc = {}) {
  if (!(a > 0.0) || !(q > 0.0))
    throw DomainError("eval_1d_inhomogeneous: need a > 0, q > 0");
  // Poles at s = 1/2 - j.
  double kr = std::round(0.5 - s.real());
  if (kr >= 0.0 && std::abs(s - Complex(0.5 - kr, 0.0)) < 1e-12) {
    int j = static_cast<int>(kr);
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    Complex res = std::sqrt(kPi / a) * sign * std::pow(q, j) /
                  std::exp(std::lgamma(j + 1.0)) *
                  detail::rgamma(Complex(0.5 - kr, 0.0));
    throw PoleError("eval_1d_inhomogeneous: pole at s = 1/2 - j",
                    Complex(0.5 - kr, 0.0), res);
  }
  Complex local = -std::pow(q, -s) +
                  std::sqrt(kPi / a) * detail::gamma_ratio_shift(s, 1) *
                      std::pow(q, 0.5 - s);
  Complex coef = 4.0 * std::pow(kPi, s) * detail::rgamma(s) *
                 std::pow(a, -0.25 - 0.5 * s.real()) *
                 std::exp(Complex(0.0, -0.5 * s.imag() * std::log(a))) *
                 std::pow(q, 0.25 - 0.5 * s);
  double xunit = 2.0 * kPi * std::sqrt(q / a);
  Complex series(0.0, 0.0);
  double err = 0.0;
  int streak = 0;
  for (int n = 1; n <= acc.max_terms; ++n) {
    double x = n * xunit;
    if (x > 700.0) break;
    double kerr = 0.0;
    Complex t = std::pow(static_cast<double>(n), s - 0.5) *
                bessel_k(s - 0.5, x, acc, &kerr);
    series += t;
    err += kerr;
    double ref = std::max(std::abs(series), acc.abs_floor);
    if (std::abs(t) < acc.rel_tol * ref) {
      if (++streak >= 3) break;
    } else {
      streak = 0;
    }
  }
  ZetaValue out;
  out.value = local + coef * series;
  out.err_estimate = std::abs(coef) * err + 1e-15 * std::abs(out.value);
  double krn = std::max(0.0, std::round(0.5 - s.real()));
  Complex loc(0.5 - krn, 0.0);
  if (std::abs(s - loc) < 0.01) {
    int j = static_cast<int>(krn);
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    out.nearest_pole = PoleInfo{
        loc,
        std::sqrt(kPi / a) * sign * std::pow(q, j) /
            std::exp(std::lgamma(j + 1.0)) * detail::rgamma(loc),
        std::abs(s - loc)};
  }
  return out;
}

// Homogeneous (massless) Epstein zeta by the dimensional recurrence.
// Splits off the axis with the largest diagonal entry of A; origin excluded.
inline ZetaValue epstein_massless_recursive(const QuadraticFormSpec& form,
                                            Complex s,
                                            const AccuracyTarget& acc = {}) {
  form.validate();
  acc.validate();
  int p = form.dim();

  // The homogeneous zeta has a single pole, at s = p/2 (the apparent poles of
  // the recursion terms at s = 1/2 - j cancel pairwise and are deflated below).
  Complex top_residue(std::pow(2.0 * kPi, 0.5 * p) /
                          (std::sqrt(form.det()) * std::exp(std::lgamma(0.5 * p))),
                      0.0);
  if (near(s, Complex(0.5 * p, 0.0), 1e-12))
    throw PoleError("epstein_massless_recursive: pole at s = p/2",
                    Complex(0.5 * p, 0.0), top_residue);

  if (p == 1) {
    double alpha = 0.5 * form.A(0, 0);
    ZetaValue z = riemann_zeta(2.0 * s, acc);
    ZetaValue out;
    out.value = 2.0 * std::pow(alpha, -s) * z.value;
    out.err_estimate = 2.0 * std::pow(alpha, -s.real()) * z.err_estimate;
    double dist = std::abs(s - Complex(0.5, 0.0));
    if (dist < 0.01)
      out.nearest_pole = PoleInfo{Complex(0.5, 0.0), top_residue, dist};
    return out;
  }

  // Permute the largest diagonal entry into position (1,1); the zeta value is
  // invariant under coordinate permutation of the lattice.
  int imax = 0;
  for (int i = 1; i < p; ++i)
    if (form.A(i, i) > form.A(imax, imax)) imax = i;
  Matrix A = form.A;
  if (imax != 0) {
    A.row(0).swap(A.row(imax));
    A.col(0).swap(A.col(imax));
  }
  QuadraticFormSpec permuted{A};
  RecurrenceDecomposition dec = decompose_first_axis(permuted);
  double alpha = 0.5 * dec.a;

  QuadraticFormSpec reduced{dec.Delta_reduced};

  // zeta' of the reduced form at a regular real point, by Richardson-refined
  // central differences (used only for the deflated s = 1/2 - j cases).
  auto reduced_deriv = [&](double x0) {
    auto g = [&](double x) {
      return epstein_massless_recursive(reduced, Complex(x, 0.0), acc)
          .value.real();
    };
    double h = 1e-4;
    double d1 = (g(x0 + h) - g(x0 - h)) / (2.0 * h);
    double d2 = (g(x0 + 0.5 * h) - g(x0 - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
  };

  Complex term12;
  double term12_err = 0.0;
  double jr = std::round(0.5 - s.real());
  bool deflate = jr >= 0.0 && std::abs(s - Complex(0.5 - jr, 0.0)) < 1e-7;
  if (deflate) {
    int j = static_cast<int>(jr);
    if (j == 0) {
      // 2 a^{-s} zeta(2s) + sqrt(pi/a) Gamma(s-1/2) zeta_red(s-1/2) / Gamma(s)
      // -> a^{-1/2} [2 gamma - ln(4a) + zeta_red'(0)] as s -> 1/2.
      term12 = (2.0 * kEulerGamma - std::log(4.0 * alpha) + reduced_deriv(0.0)) /
               std::sqrt(alpha);
    } else {
      ZetaValue base = riemann_zeta(2.0 * s, acc);
      double sign = (j % 2 == 0) ? 1.0 : -1.0;
      // Gamma(s-1/2) pole meets the zero of zeta_red at -j:
      // limit = sqrt(pi/a) (-1)^j zeta_red'(-j) / (j! Gamma(1/2-j)).
      Complex term2 = std::sqrt(kPi / alpha) * sign *
                      reduced_deriv(-static_cast<double>(j)) /
                      (std::exp(std::lgamma(j + 1.0)) *
                       detail::gamma_deflated(Complex(0.5 - j, 0.0)));
      term12 = 2.0 * std::pow(alpha, -s) * base.value + term2;
    }
    term12_err = 1e-8 * (1.0 + std::abs(term12));
  } else {
    ZetaValue base = riemann_zeta(2.0 * s, acc);
    ZetaValue sub = epstein_massless_recursive(reduced, s - 0.5, acc);
    Complex gshift = detail::gamma_ratio_shift(s, 1);
    term12 = 2.0 * std::pow(alpha, -s) * base.value +
             std::sqrt(kPi / alpha) * gshift * sub.value;
    term12_err = 2.0 * std::pow(alpha, -s.real()) * base.err_estimate +
                 std::abs(std::sqrt(kPi / alpha) * gshift) * sub.err_estimate;
  }

  // Double Bessel series over n2 in Z^{p-1} \ {0} (folded to half-lattice,
  // cosine is even) and n1 >= 1.
  Complex coef = 4.0 * std::pow(kPi, s) * detail::rgamma(s) *
                 std::pow(alpha, -0.5 * s - 0.25);
  double bessel_err = 0.0;
  auto outer_term = [&](const IVec& n2) -> Complex {
    double R = 0.0, phase = 0.0;
    for (int i = 0; i < p - 1; ++i) {
      phase += dec.b[i] * n2[i];
      for (int j = 0; j < p - 1; ++j)
        R += 0.5 * n2[i] * dec.Delta_reduced(i, j) * n2[j];
    }
    phase *= kPi / dec.a;  // pi n1 b.n2 / a per unit n1
    double xunit = 2.0 * kPi * std::sqrt(R) / std::sqrt(alpha);
    Complex inner(0.0, 0.0);
    for (int n1 = 1; n1 <= acc.max_terms; ++n1) {
      double x = n1 * xunit;
      if (x > 700.0) break;
      double kerr = 0.0;
      Complex t = std::cos(phase * n1) * std::pow(static_cast<double>(n1), s - 0.5) *
                  std::exp((0.25 - 0.5 * s) * std::log(R)) *
                  bessel_k(s - 0.5, x, acc, &kerr);
      inner += t;
      bessel_err += kerr;
      if (std::abs(t) < 0.25 * acc.rel_tol *
                            std::max(std::abs(inner), acc.abs_floor) &&
          n1 > 2)
        break;
    }
    return 2.0 * inner;  // fold of the +-n2 pair
  };
  detail::ShellSeries series =
      detail::sum_half_lattice_shells(p - 1, outer_term, acc);

  ZetaValue out;
  out.value = term12 + coef * series.sum;
  out.err_estimate = term12_err + std::abs(coef) * (series.err + bessel_err) +
                     1e-15 * std::abs(out.value);
  double dist = std::abs(s - Complex(0.5 * p, 0.0));
  if (dist < 0.01)
    out.nearest_pole = PoleInfo{Complex(0.5 * p, 0.0), top_residue, dist};
  return out;
}

// Chowla-Selberg closed form for the 2-D homogeneous zeta over the form
// a n1^2 + b n1 n2 + c n2^2 (origin excluded); valid on the whole plane,
// simple pole at s = 1 with residue 2 pi / sqrt(Delta).
inline ZetaValue chowla_selberg_2d(double a, double b, double c, Complex s,
                                   const AccuracyTarget& acc = {}) {
  double Delta = 4.0 * a * c - b * b;
  if (!(a > 0.0) || !(Delta > 0.0))
    throw DomainError("chowla_selberg_2d: form must be positive definite");
  Complex res1(2.0 * kPi / std::sqrt(Delta), 0.0);
  if (near(s, Complex(1.0, 0.0), 1e-12))
    throw PoleError("chowla_selberg_2d: pole at s = 1", Complex(1.0, 0.0), res1);

  Complex head;
  Complex h = s - 0.5;
  if (std::abs(h) < 1e-7) {
    // The zeta(2s) and Gamma(s-1/2) poles cancel at s = 1/2; use the limit.
    head = (2.0 * kEulerGamma -
            std::log(64.0 * kPi * kPi * a * a / Delta)) /
           std::sqrt(a);
  } else {
    ZetaValue z2s = riemann_zeta(2.0 * s, acc);
    ZetaValue z2sm1 = riemann_zeta(2.0 * s - 1.0, acc);
    head = 2.0 * z2s.value * std::pow(a, -s) +
           std::pow(2.0, 2.0 * s) * std::sqrt(kPi) * std::pow(a, s - 1.0) *
               detail::gamma_deflated(s - 0.5) * detail::rgamma(s) *
               z2sm1.value * std::pow(Delta, 0.5 - s);
  }

  Complex coef = std::pow(2.0, s + 2.5) * std::pow(kPi, s) * detail::rgamma(s) *
                 std::exp((0.25 - 0.5 * s) * std::log(Delta)) / std::sqrt(a);
  double xunit = kPi * std::sqrt(Delta) / a;
  Complex series(0.0, 0.0);
  double err = 0.0;
  int streak = 0;
  for (int n = 1; n <= acc.max_terms; ++n) {
    double x = n * xunit;
    if (x > 700.0) break;
    double kerr = 0.0;
    Complex t = std::pow(static_cast<double>(n), s - 0.5) *
                divisor_sigma(1.0 - 2.0 * s, n) * std::cos(kPi * n * b / a) *
                bessel_k(s - 0.5, x, acc, &kerr);
    series += t;
    err += kerr;
    if (std::abs(t) < acc.rel_tol * std::max(std::abs(series), acc.abs_floor)) {
      if (++streak >= 3) break;
    } else {
      streak = 0;
    }
  }
  ZetaValue out;
  out.value = head + coef * series;
  out.err_estimate = std::abs(coef) * err + 1e-15 * std::abs(out.value);
  if (std::abs(s - Complex(1.0, 0.0)) < 0.01)
    out.nearest_pole = PoleInfo{Complex(1.0, 0.0), res1, std::abs(s - 1.0)};
  return out;
}

// 2-D inhomogeneous fast path over a n1^2 + b n1 n2 + c n2^2 + q, origin
// excluded (the -q^{-s} term); simple pole at s = 1, residue 2 pi / sqrt(Delta).
inline ZetaValue epstein_2d_inhomogeneous(double a, double b, double c, double q,
                                          Complex s,
                                          const AccuracyTarget& acc = {}) {
  double Delta = 4.0 * a * c - b * b;
  if (!(a > 0.0) || !(Delta > 0.0))
    throw DomainError("epstein_2d_inhomogeneous: form must be positive definite");
  if (!(q > 0.0)) throw DomainError("epstein_2d_inhomogeneous: q must be > 0");
  Complex res1(2.0 * kPi / std::sqrt(Delta), 0.0);
  if (near(s, Complex(1.0, 0.0), 1e-12))
    throw PoleError("epstein_2d_inhomogeneous: pole at s = 1", Complex(1.0, 0.0),
                    res1);

  Complex head = -std::pow(q, -s) +
                 2.0 * kPi * std::pow(q, 1.0 - s) / ((s - 1.0) * std::sqrt(Delta));
  Complex rg = detail::rgamma(s);
  double err = 0.0;

  auto sum_series = [&](auto&& term_fn) {
    Complex acc_sum(0.0, 0.0);
    int streak = 0;
    for (int n = 1; n <= acc.max_terms; ++n) {
      Complex t = term_fn(n);
      acc_sum += t;
      if (std::abs(t) <
          acc.rel_tol * std::max(std::abs(acc_sum), acc.abs_floor)) {
        if (++streak >= 3) break;
      } else {
        streak = 0;
      }
    }
    return acc_sum;
  };

  double x1 = 2.0 * kPi * std::sqrt(q / a);
  Complex b1 = std::pow(q / a, 0.25) * std::pow(kPi / std::sqrt(q * a), s) *
               sum_series([&](int n) -> Complex {
                 double x = n * x1;
                 if (x > 700.0) return {0.0, 0.0};
                 double kerr = 0.0;
                 Complex kv = bessel_k(s - 0.5, x, acc, &kerr);
                 err += kerr;
                 return std::pow(static_cast<double>(n), s - 0.5) * kv;
               });
  double x2 = 4.0 * kPi * std::sqrt(a * q / Delta);
  Complex b2 = std::sqrt(q / a) * std::pow(2.0 * kPi * std::sqrt(a / (q * Delta)), s) *
               sum_series([&](int n) -> Complex {
                 double x = n * x2;
                 if (x > 700.0) return {0.0, 0.0};
                 double kerr = 0.0;
                 Complex kv = bessel_k(s - 1.0, x, acc, &kerr);
                 err += kerr;
                 return std::pow(static_cast<double>(n), s - 1.0) * kv;
               });
  Complex b3 = std::sqrt(2.0 / a) * std::pow(2.0 * kPi, s) *
               sum_series([&](int n) -> Complex {
                 Complex tot(0.0, 0.0);
                 for (std::uint64_t d : divisors(n)) {
                   double R = Delta + 4.0 * a * q / (static_cast<double>(d) * d);
                   double x = kPi * n / a * std::sqrt(R);
                   if (x > 700.0) continue;
                   double kerr = 0.0;
                   Complex kv = bessel_k(s - 0.5, x, acc, &kerr);
                   err += kerr;
                   tot += std::exp((1.0 - 2.0 * s) * std::log(static_cast<double>(d))) *
                          std::exp((0.25 - 0.5 * s) * std::log(R)) * kv;
                 }
                 return std::pow(static_cast<double>(n), s - 0.5) *
                        std::cos(kPi * n * b / a) * tot;
               });

  ZetaValue out;
  out.value = head + 4.0 * rg * (b1 + b2 + b3);
  out.err_estimate = 4.0 * std::abs(rg) * err + 1e-15 * std::abs(out.value);
  if (std::abs(s - Complex(1.0, 0.0)) < 0.01)
    out.nearest_pole = PoleInfo{Complex(1.0, 0.0), res1, std::abs(s - 1.0)};
  return out;
}

// Both sides of the Epstein reflection formula for Z(s; M) = sum' (n^T M n)^{-s}:
//   Gamma(s) Z(s; M) = pi^{2s - p/2} / sqrt(det M) Gamma(p/2 - s) Z(p/2 - s; M^{-1}).
// The form argument carries M through its Q = (1/2) n^T A n convention, M = A/2.
inline std::pair<Complex, Complex> epstein_reflection(
    const QuadraticFormSpec& form, Complex s, const AccuracyTarget& acc = {}) {
  form.validate();
  int p = form.dim();
  Matrix M = 0.5 * form.A;
  QuadraticFormSpec lhs_form{2.0 * M};
  Matrix Minv = M.inverse();
  Minv = 0.5 * (Minv + Minv.transpose()).eval();  // restore exact symmetry
  QuadraticFormSpec rhs_form{2.0 * Minv};
  Complex lhs = complex_gamma(s) * epstein_massless_recursive(lhs_form, s, acc).value;
  Complex rhs = std::pow(kPi, 2.0 * s - 0.5 * p) / std::sqrt(M.determinant()) *
                complex_gamma(0.5 * p - s) *
                epstein_massless_recursive(rhs_form, 0.5 * p - s, acc).value;
  return {lhs, rhs};
}

// Both sides of the Jacobi theta identity
//   sum_n e^{-(n+z)^2 t} = sqrt(pi/t) [1 + 2 sum_{n>=1} e^{-pi^2 n^2 / t} cos(2 pi n z)]
// with truncation tails below 1e-14.  (The direct numerical check fixes the
// factor 2 on the dual series.)
inline std::pair<Complex, Complex> jacobi_theta_check(Complex z, Complex t) {
  if (!(t.real() > 0.0)) throw DomainError("jacobi_theta_check: need Re t > 0");
  Complex lhs(0.0, 0.0);
  int N = static_cast<int>(std::ceil(std::sqrt(40.0 / t.real()) + std::abs(z))) + 2;
  for (int n = -N; n <= N; ++n) {
    Complex u = (static_cast<double>(n) + z);
    lhs += std::exp(-u * u * t);
  }
  double re_inv_t = (1.0 / t).real();
  int M = static_cast<int>(std::ceil(std::sqrt(
              (40.0 + 2.0 * kPi * std::abs(z.imag())) / (kPi * kPi * re_inv_t)))) +
          2;
  Complex dual(0.0, 0.0);
  for (int n = 1; n <= M; ++n) {
    dual += std::exp(-kPi * kPi * static_cast<double>(n) * n / t) *
            std::cos(2.0 * kPi * static_cast<double>(n) * z);
  }
  Complex rhs = std::sqrt(kPi / t) * (1.0 + 2.0 * dual);
  return {lhs, rhs};
}

// Experimental: Bessel-series evaluation for complex q.  The representation
// stays valid but exponential convergence is only guaranteed for q >= 0, so
// callers must opt in explicitly.
inline ZetaValue epstein_inhomogeneous_complex_q(const QuadraticFormSpec& form,
                                                 const Vector& offset, Complex q,
                                                 Complex s,
                                                 const AccuracyTarget& acc,
                                                 bool experimental_opt_in) {
  if (!experimental_opt_in)
    throw DomainError(
        "epstein_inhomogeneous_complex_q: complex q requires the experimental flag");
  if (q.imag() == 0.0 && q.real() > 0.0) {
    EpsteinParams params{form, offset, q.real()};
    return epstein_inhomogeneous(params, s, acc);
  }
  throw ConvergenceError(
      "epstein_inhomogeneous_complex_q: convergence not guaranteed for q outside "
      "[0, inf); no certified evaluation path");
}

}  // namespace latzeta

#endif  // LATZETA_EPSTEIN_HPP
