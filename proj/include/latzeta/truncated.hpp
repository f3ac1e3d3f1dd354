// Truncated (half-line) inhomogeneous zeta sum_{n>=0} [a(n+c)^2+q]^{-s},
// continued by the superasymptotically truncated representation.
#ifndef LATZETA_TRUNCATED_HPP
#define LATZETA_TRUNCATED_HPP

#include <cmath>
#include <utility>

#include "latzeta/epstein.hpp"
#include "latzeta/specfun.hpp"

namespace latzeta {

struct TruncatedParams {
  double a = 1.0;
  double c = 1.0;
  double q = 1.0;

  void validate() const {
    if (!(a > 0.0)) throw DomainError("TruncatedParams: a must be > 0");
    if (!(q > 0.0)) throw DomainError("TruncatedParams: q must be > 0");
    if (!(c > 0.0)) throw DomainError("TruncatedParams: c must be > 0");
  }
};

struct AsymptoticResult {
  Complex value;
  int terms_used = 0;
  double smallest_term = 0.0;
  double err_estimate = 0.0;
  bool accuracy_floor_hit = false;  // smallest term above the requested tol
  std::optional<PoleInfo> nearest_pole;
};

namespace detail {

// Core evaluation with c restricted to (0, 1].
inline AsymptoticResult truncated_zeta_canonical(double a, double c, double q,
                                                 Complex s,
                                                 const AccuracyTarget& acc) {
  // Poles at s = 1/2 - j; residue of this representation is
  // (2j-1)!! q^j / (2 j! (2a)^j sqrt(a))  [half of the double-factorial form].
  auto ladder_residue = [&](int j) {
    double dfac = 1.0;
    for (int i = 2 * j - 1; i >= 1; i -= 2) dfac *= i;
    return Complex(dfac * std::pow(q, j) /
                       (2.0 * std::exp(std::lgamma(j + 1.0)) * std::pow(2.0, j) *
                        std::sqrt(a)),
                   0.0);
  };
  double kr = std::round(0.5 - s.real());
  if (kr >= 0.0 && std::abs(s - Complex(0.5 - kr, 0.0)) < 1e-12) {
    int j = static_cast<int>(kr);
    throw PoleError("truncated_zeta: pole at s = 1/2 - j", Complex(0.5 - kr, 0.0),
                    ladder_residue(j));
  }

  AsymptoticResult out;

  Complex head = (0.5 - c) * std::pow(q, -s);
  Complex gterm = 0.5 * std::sqrt(kPi / a) * gamma_ratio_shift(s, 1) *
                  std::pow(q, 0.5 - s);

  // Asymptotic series, truncated at the smallest term (superasymptotic rule):
  // q^{-s}/Gamma(s) sum_{m>=1} (-1)^m Gamma(m+s)/m! (q/a)^{-m} zeta_H(-2m, c).
  Complex asum(0.0, 0.0);
  double smallest = std::numeric_limits<double>::infinity();
  int used = 0;
  double prev_mag = std::numeric_limits<double>::infinity();
  Complex qs = std::pow(q, -s);
  Complex rg = rgamma(s);
  for (int m = 1; m <= 64; ++m) {
    // Gamma(m+s)/Gamma(s) = s (s+1) ... (s+m-1), stable for any regular s.
    Complex poch(1.0, 0.0);
    for (int i = 0; i < m; ++i) poch *= (s + static_cast<double>(i));
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double zh = -bernoulli_poly(2 * m + 1, c) / (2.0 * m + 1.0);
    Complex term = qs * sign * poch / std::exp(std::lgamma(m + 1.0)) *
                   std::pow(q / a, -static_cast<double>(m)) * zh;
    double mag = std::abs(term);
    if (mag >= prev_mag) {
      smallest = prev_mag;
      break;  // divergence onset: stop before this term
    }
    asum += term;
    used = m;
    prev_mag = mag;
    smallest = mag;
  }
  out.terms_used = used;
  out.smallest_term = smallest;
  out.accuracy_floor_hit =
      smallest > acc.rel_tol * std::max(std::abs(asum) + std::abs(head), 1.0);

  // Exponentially convergent dual series.
  Complex coef = 2.0 * std::pow(kPi, s) * rg * std::pow(a, -0.25 - 0.5 * s.real()) *
                 std::exp(Complex(0.0, -0.5 * s.imag() * std::log(a))) *
                 std::pow(q, 0.25 - 0.5 * s);
  double xunit = 2.0 * kPi * std::sqrt(q / a);
  Complex bsum(0.0, 0.0);
  double berr = 0.0;
  int streak = 0;
  for (int n = 1; n <= acc.max_terms; ++n) {
    double x = n * xunit;
    if (x > 700.0) break;
    double kerr = 0.0;
    Complex t = std::cos(2.0 * kPi * n * c) *
                std::pow(static_cast<double>(n), s - 0.5) *
                bessel_k(s - 0.5, x, acc, &kerr);
    bsum += t;
    berr += kerr;
    if (std::abs(t) < acc.rel_tol * std::max(std::abs(bsum), acc.abs_floor)) {
      if (++streak >= 3) break;
    } else {
      streak = 0;
    }
  }

  out.value = head + gterm + asum + coef * bsum;
  // the remainder of a superasymptotic truncation is of the order of the
  // first dropped term; budget twice the smallest retained term
  out.err_estimate =
      2.0 * smallest + std::abs(coef) * berr + 1e-15 * std::abs(out.value);

  double krn = std::max(0.0, std::round(0.5 - s.real()));
  Complex loc(0.5 - krn, 0.0);
  if (std::abs(s - loc) < 0.01)
    out.nearest_pole =
        PoleInfo{loc, ladder_residue(static_cast<int>(krn)), std::abs(s - loc)};
  return out;
}

}  // namespace detail

// zeta_{G_t}(s; a, c; q) = sum_{n>=0} [a(n+c)^2 + q]^{-s}.  c > 1 is reduced
// by the exact shift sum_{n>=0} f(n+c) = sum_{n>=0} f(n+c-1) - f(c-1).
inline AsymptoticResult truncated_zeta(const TruncatedParams& params, Complex s,
                                       const AccuracyTarget& acc = {}) {
  params.validate();
  acc.validate();
  double c = params.c;
  Complex shift(0.0, 0.0);
  while (c > 1.0) {
    c -= 1.0;
    double base = params.a * c * c + params.q;
    shift -= std::exp(-s * std::log(base));
  }
  AsymptoticResult out =
      detail::truncated_zeta_canonical(params.a, c, params.q, s, acc);
  out.value += shift;
  return out;
}

// Residue bookkeeping at s = 1/2 - j.  Returns the closed form
// (2j-1)!! q^j / (j! 2^j sqrt(a)) alongside the residue of the implemented
// representation extracted as a Richardson limit of (s - s_j) zeta(s); the two
// differ by an exact factor of 2 (see README).
inline std::pair<double, double> truncated_residue(const TruncatedParams& params,
                                                   int j,
                                                   const AccuracyTarget& acc = {}) {
  params.validate();
  if (j < 0 || j > 6) throw DomainError("truncated_residue: j must be in 0..6");
  double dfac = 1.0;
  for (int i = 2 * j - 1; i >= 1; i -= 2) dfac *= i;
  double closed_form = dfac * std::pow(params.q, j) /
                       (std::exp(std::lgamma(j + 1.0)) * std::pow(2.0, j) *
                        std::sqrt(params.a));

  double s0 = 0.5 - j;
  // f(h) = h * zeta(s0 + h) = R + b h + c h^2 + ...; two-level Richardson.
  auto f = [&](double h) {
    Complex v = truncated_zeta(params, Complex(s0 + h, 0.0), acc).value;
    Complex vm = truncated_zeta(params, Complex(s0 - h, 0.0), acc).value;
    return 0.5 * h * (v - vm).real();  // odd average kills the even terms
  };
  double h = 1e-3;
  double f1 = f(h), f2 = f(0.5 * h);
  double extracted = (4.0 * f2 - f1) / 3.0;
  return {closed_form, extracted};
}

// Index-bijection check: the full-line zeta over n in Z of [a(n+c)^2+q]^{-s}
// (origin included) equals the two half-line pieces at offsets c and 1-c.
inline std::pair<Complex, Complex> full_line_split_check(double a, double c,
                                                         double q, Complex s,
                                                         const AccuracyTarget& acc = {}) {
  if (!(c > 0.0 && c < 1.0))
    throw DomainError("full_line_split_check: c must be in (0,1)");
  QuadraticFormSpec form{Matrix::Constant(1, 1, 2.0 * a)};
  Vector offset(1);
  offset[0] = c;
  EpsteinParams params{form, offset, q};
  Complex lhs =
      epstein_inhomogeneous(params, s, acc, /*include_origin=*/true).value;
  Complex rhs = truncated_zeta({a, c, q}, s, acc).value +
                truncated_zeta({a, 1.0 - c, q}, s, acc).value;
  return {lhs, rhs};
}

}  // namespace latzeta

#endif  // LATZETA_TRUNCATED_HPP
