// Complex-argument special functions: Gamma, Riemann/Hurwitz zeta,
// modified Bessel K of complex order, divisor sums.
#ifndef LATZETA_SPECFUN_HPP
#define LATZETA_SPECFUN_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "latzeta/core.hpp"

namespace latzeta {

namespace detail {

// Lanczos approximation, g = 7, 9 terms.
inline Complex lanczos_sum(Complex z) {
  static const std::array<double, 9> coef = {
      0.99999999999980993,     676.5203681218851,   -1259.1392167224028,
      771.32342877765313,     -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
  Complex acc(coef[0], 0.0);
  for (int i = 1; i < 9; ++i) acc += coef[i] / (z + Complex(i, 0.0));
  return acc;
}

inline bool is_nonpositive_integer(Complex s, double tol = 1e-13) {
  if (std::abs(s.imag()) > tol) return false;
  double r = std::round(s.real());
  return r <= 0.0 && std::abs(s.real() - r) <= tol * std::max(1.0, std::abs(r));
}

}  // namespace detail

inline Complex complex_gamma(Complex s) {
  if (detail::is_nonpositive_integer(s))
    throw PoleError("gamma: pole at non-positive integer",
                    Complex(std::round(s.real()), 0.0), Complex());
  if (s.real() < 0.5) {
    // Reflection formula.
    return kPi / (std::sin(kPi * s) * complex_gamma(1.0 - s));
  }
  Complex z = s - 1.0;
  Complex x = detail::lanczos_sum(z);
  Complex t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// Principal-branch log Gamma; continuous on Re s > 0.
inline Complex log_gamma(Complex s) {
  if (s.real() < 0.5) {
    return std::log(kPi / std::sin(kPi * s)) - log_gamma(1.0 - s);
  }
  Complex z = s - 1.0;
  Complex x = detail::lanczos_sum(z);
  Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Gamma(h) evaluated as Gamma(1+h)/h; accurate for tiny |h| near the pole at 0.
inline Complex gamma_near_zero(Complex h) {
  return complex_gamma(1.0 + h) / h;
}

inline double digamma_positive_integer(int n) {
  // Psi(n) = -gamma + H_{n-1}
  double h = 0.0;
  for (int k = 1; k < n; ++k) h += 1.0 / k;
  return -kEulerGamma + h;
}

namespace detail {

// Bernoulli numbers B_{2k}; B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}.
inline const std::vector<double>& bernoulli_even(int max2k = 120) {
  static const std::vector<double> table = [] {
    std::vector<double> b(121, 0.0);
    b[0] = 1.0;
    for (int twok = 2; twok <= 120; twok += 2) {
      int k = twok / 2;
      // zeta(2k) by a short sum plus Euler-Maclaurin tail corrections.
      const double N = 40.0;
      const double s = twok;
      double z = 0.0;
      for (int n = 1; n < 40; ++n) {
        double t = std::pow(static_cast<double>(n), -twok);
        if (t == 0.0) break;
        z += t;
      }
      z += std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s) +
           s / 12.0 * std::pow(N, -s - 1.0) -
           s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(N, -s - 3.0) +
           s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 *
               std::pow(N, -s - 5.0);
      double lg = std::lgamma(twok + 1.0);
      double val = 2.0 * std::exp(lg - twok * std::log(2.0 * kPi)) * z;
      b[twok] = (k % 2 == 1) ? val : -val;
    }
    return b;
  }();
  return table;
}

inline double bernoulli_number(int n) {
  if (n == 0) return 1.0;
  if (n == 1) return -0.5;
  if (n % 2 == 1) return 0.0;
  return bernoulli_even()[n];
}

// Bernoulli polynomial B_n(x).
inline double bernoulli_poly(int n, double x) {
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    // binom = C(n, k)
    sum += binom * bernoulli_number(k) * std::pow(x, n - k);
    binom *= static_cast<double>(n - k) / (k + 1);
  }
  return sum;
}

}  // namespace detail

// Hurwitz zeta, analytic continuation via Euler-Maclaurin; exact Bernoulli
// polynomial values at non-positive integer s.
inline ZetaValue hurwitz_zeta(Complex s, double c,
                              const AccuracyTarget& acc = {}) {
  if (!(c > 0.0)) throw DomainError("hurwitz_zeta: c must be positive");
  if (near(s, Complex(1.0, 0.0), 1e-13))
    throw PoleError("hurwitz_zeta: pole at s = 1", Complex(1.0, 0.0),
                    Complex(1.0, 0.0));
  ZetaValue out;
  if (detail::is_nonpositive_integer(s)) {
    int n = static_cast<int>(-std::round(s.real()));
    out.value = Complex(-detail::bernoulli_poly(n + 1, c) / (n + 1), 0.0);
    out.err_estimate = 1e-15 * std::abs(out.value);
    return out;
  }
  int N = 16 + static_cast<int>(std::ceil(std::abs(s)));
  int K = 8 + std::max(0, static_cast<int>(std::ceil(-s.real() / 2.0)));
  Complex sum(0.0, 0.0);
  for (int n = 0; n < N; ++n) sum += std::pow(n + c, -s);
  double Nc = N + c;
  sum += std::pow(Nc, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(Nc, -s);
  // Bernoulli tail corrections: sum_k B_{2k}/(2k)! (s)_{2k-1} (N+c)^{-s-2k+1}
  Complex poch = s;  // (s)_1
  Complex last(0.0, 0.0);
  for (int k = 1; k <= K; ++k) {
    double b2k = detail::bernoulli_number(2 * k);
    double fact = std::exp(std::lgamma(2.0 * k + 1.0));
    last = (b2k / fact) * poch * std::pow(Nc, -s - (2.0 * k - 1.0));
    sum += last;
    poch *= (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
  }
  out.value = sum;
  out.err_estimate = std::abs(last) + 1e-16 * std::abs(sum);
  if (std::abs(s - Complex(1.0, 0.0)) < 0.01)
    out.nearest_pole = PoleInfo{Complex(1.0, 0.0), Complex(1.0, 0.0),
                                std::abs(s - Complex(1.0, 0.0))};
  return out;
}

// Riemann zeta via the shared Euler-Maclaurin engine (so that
// riemann_zeta(s) == hurwitz_zeta(s, 1) as an identity of evaluators),
// with the functional equation for far-left arguments.
inline ZetaValue riemann_zeta(Complex s, const AccuracyTarget& acc = {}) {
  if (near(s, Complex(1.0, 0.0), 1e-13))
    throw PoleError("riemann_zeta: pole at s = 1", Complex(1.0, 0.0),
                    Complex(1.0, 0.0));
  if (s.real() < -2.0 && !detail::is_nonpositive_integer(s)) {
    // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    ZetaValue right = hurwitz_zeta(1.0 - s, 1.0, acc);
    Complex pref = std::pow(2.0, s) * std::pow(kPi, s - 1.0) *
                   std::sin(kPi * s / 2.0) * complex_gamma(1.0 - s);
    return {pref * right.value, std::abs(pref) * right.err_estimate, {}};
  }
  return hurwitz_zeta(s, 1.0, acc);
}

// Modified Bessel K_nu(x), complex order, real positive argument, via the
// integral representation  K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt.
inline Complex bessel_k(Complex nu, double x, const AccuracyTarget& acc = {},
                        double* err_out = nullptr) {
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive");
  if (std::abs(nu.real()) > 200.0)
    throw DomainError("bessel_k: |Re nu| > 200 outside supported envelope");
  const double arn = std::abs(nu.real());
  // Truncation point: x cosh T - |Re nu| T = L.
  const double L = -std::log(std::max(acc.abs_floor, 1e-300)) + 5.0;
  double T = std::acosh(std::max(L / x, 1.0) + 1.0);
  for (int i = 0; i < 40; ++i) T = std::acosh(std::min((L + arn * T) / x, 1e300));
  if (x > 700.0) {
    // e^{-x} underflow regime
    if (err_out) *err_out = 1e-300;
    return Complex(0.0, 0.0);
  }

  auto integrand = [&](double t) -> Complex {
    return std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
  };
  // Adaptive Simpson.
  struct Seg { double a, b; Complex fa, fm, fb, whole; };
  auto simpson = [&](double a, double b, Complex fa, Complex fm, Complex fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  std::vector<Seg> stack;
  // Initial panels sized to resolve cosh(Im nu * t) oscillation.
  int npanel = 8 + static_cast<int>(std::abs(nu.imag()) * T / 3.0);
  Complex total(0.0, 0.0);
  double err_total = 0.0;
  const double tol = acc.rel_tol;
  for (int p = 0; p < npanel; ++p) {
    double a = T * p / npanel, b = T * (p + 1) / npanel;
    double m = 0.5 * (a + b);
    Seg s0{a, b, integrand(a), integrand(m), integrand(b), Complex()};
    s0.whole = simpson(a, b, s0.fa, s0.fm, s0.fb);
    stack.push_back(s0);
  }
  double scale = 0.0;
  for (auto& s0 : stack) scale += std::abs(s0.whole);
  scale = std::max(scale, acc.abs_floor);
  int evals = 0;
  while (!stack.empty()) {
    Seg s0 = stack.back();
    stack.pop_back();
    double m = 0.5 * (s0.a + s0.b);
    double lm = 0.5 * (s0.a + m), rm = 0.5 * (m + s0.b);
    Complex flm = integrand(lm), frm = integrand(rm);
    Complex left = simpson(s0.a, m, s0.fa, flm, s0.fm);
    Complex right = simpson(m, s0.b, s0.fm, frm, s0.fb);
    Complex delta = left + right - s0.whole;
    evals += 2;
    if (std::abs(delta) < 15.0 * tol * std::max(scale, std::abs(left + right)) ||
        (s0.b - s0.a) < 1e-12) {
      total += left + right + delta / 15.0;
      err_total += std::abs(delta) / 15.0;
    } else {
      if (evals > acc.max_terms)
        throw ConvergenceError("bessel_k: quadrature did not converge");
      stack.push_back(Seg{s0.a, m, s0.fa, flm, s0.fm, left});
      stack.push_back(Seg{m, s0.b, s0.fm, frm, s0.fb, right});
    }
  }
  if (err_out) *err_out = err_total + std::exp(-L + 5.0);
  return total;
}

// sigma_s(n) = sum over divisors d|n of d^s, exact trial-division enumeration.
inline Complex divisor_sigma(Complex s, std::uint64_t n) {
  if (n == 0) throw DomainError("divisor_sigma: n must be >= 1");
  Complex sum(0.0, 0.0);
  auto add = [&](std::uint64_t d) {
    sum += std::exp(s * std::log(static_cast<double>(d)));
  };
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    add(d);
    if (d != n / d) add(n / d);
  }
  return sum;
}

// All divisors of n (used by divisor-weighted Bessel series).
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> lo, hi;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  for (auto it = hi.rbegin(); it != hi.rend(); ++it) lo.push_back(*it);
  return lo;
}

}  // namespace latzeta

#endif  // LATZETA_SPECFUN_HPP
