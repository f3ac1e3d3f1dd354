// Physical endpoints: Casimir energies on d-tori and zeta-regularized
// determinants in closed form.
#ifndef LATZETA_PHYSICS_HPP
#define LATZETA_PHYSICS_HPP

#include <cmath>

#include "latzeta/epstein.hpp"
#include "latzeta/specfun.hpp"

namespace latzeta {

// Torus with metric g (mode frequencies omega^2 = n^T g n + m^2).
struct TorusSpec {
  Matrix g;
  double m = 0.0;

  int dim() const { return static_cast<int>(g.rows()); }
  void validate() const {
    QuadraticFormSpec f{g};
    f.validate();
    if (!(m >= 0.0)) throw DomainError("TorusSpec: mass must be >= 0");
  }
};

struct TorusModuli2D {
  double tau1 = 0.0;
  double tau2 = 1.0;
  void validate() const {
    if (!(tau2 > 0.0)) throw DomainError("TorusModuli2D: tau2 must be > 0");
  }
};

// E = zeta_{g,0,m^2}(-1/2), with no extra 1/2 prefactor.  The library form
// convention Q(n) = (1/2) n^T A n means A = 2g.
//
// For odd d with m > 0 the continuation has a simple pole at s = -1/2 coming
// from the polynomial-in-m^2 local heat-kernel terms; the returned energy is
// then the renormalized value, i.e. the exponentially small nonlocal
// (winding) part alone, with the local polynomial subtracted.  For even d
// (and for m = 0 in any d) s = -1/2 is regular and the full value is
// returned, origin mode included when m > 0.
inline double casimir_energy_torus(const TorusSpec& torus,
                                   const AccuracyTarget& acc = {}) {
  torus.validate();
  int d = torus.dim();
  QuadraticFormSpec form{2.0 * torus.g};
  Complex s(-0.5, 0.0);
  if (torus.m == 0.0) {
    return epstein_massless_recursive(form, s, acc).value.real();
  }
  EpsteinParams params{form, Vector::Zero(d), torus.m * torus.m};
  if (d % 2 == 1)
    return epstein_inhomogeneous_nonlocal(params, s, acc).value.real();
  return epstein_inhomogeneous(params, s, acc, /*include_origin=*/true)
      .value.real();
}

// zeta'_{A,c,q}(0) of the full (origin-included) sum, in closed form:
// the K_{p/2} half-lattice series plus a parity-dependent local term.
// The origin-excluded derivative is this value + ln(Q(c)+q).
inline Complex zeta_prime_zero_pd(const EpsteinParams& params,
                                  const AccuracyTarget& acc = {}) {
  params.validate();
  acc.validate();
  if (!(params.q > 0.0)) throw DomainError("zeta_prime_zero_pd: q must be > 0");
  int p = params.form.dim();
  double q = params.q;
  double sqdet = std::sqrt(params.form.det());

  Matrix Ainv = params.form.A.inverse();
  double coef = 4.0 * std::pow(2.0 * q, 0.25 * p) / sqdet;
  Complex nu(0.5 * p, 0.0);
  double bessel_err = 0.0;
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
    return std::cos(2.0 * kPi * phase) * std::pow(quad, -0.25 * p) * kv;
  };
  detail::ShellSeries series = detail::sum_half_lattice_shells(p, term, acc);

  Complex local;
  if (p % 2 == 1) {
    local = std::pow(2.0 * kPi, 0.5 * p) *
            detail::gamma_deflated(Complex(-0.5 * p, 0.0)) *
            std::pow(q, 0.5 * p) / sqdet;
  } else {
    int k = p / 2;
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double harmonic = 0.0;  // Psi(k+1) + gamma = H_k
    for (int i = 1; i <= k; ++i) harmonic += 1.0 / i;
    local = sign * std::pow(2.0 * kPi, k) * std::pow(q, k) /
            (std::exp(std::lgamma(k + 1.0)) * sqdet) *
            (harmonic - std::log(q));
  }
  return local + coef * series.sum;
}

// det_zeta of the 2-D operator a n1^2 + b n1 n2 + c n2^2 + q over the full
// lattice (q > 0), or its homogeneous origin-excluded counterpart (q = 0).
// The q > 0 branch is the closed form whose correctness is pinned by the
// exp(-zeta'(0)) cross-check against the K_{p/2}-series derivative.
inline double det_torus_2d(double a, double b, double c, double q) {
  double Delta = 4.0 * a * c - b * b;
  if (!(a > 0.0) || !(Delta > 0.0))
    throw DomainError("det_torus_2d: form must be positive definite");
  AccuracyTarget acc;
  if (q > 0.0) {
    double sum = 0.0;
    for (int n = 1; n <= acc.max_terms; ++n) {
      double x2 = 4.0 * kPi * n * std::sqrt(a * q / Delta);
      double t = 0.0;
      if (x2 <= 700.0) {
        double kerr = 0.0;
        t += std::sqrt(q / a) * bessel_k(Complex(1.0, 0.0), x2, acc, &kerr).real();
      }
      double dsum = 0.0;
      for (std::uint64_t d : divisors(n)) {
        double e = kPi * n / a * std::sqrt(Delta + 4.0 * a * q / (static_cast<double>(d) * d));
        if (e <= 700.0) dsum += static_cast<double>(d) * std::exp(-e);
      }
      t += std::cos(kPi * n * b / a) * dsum;
      sum += t / n;
      if (std::abs(t) < 1e-18 * std::max(std::abs(sum), 1e-280) && n > 3) break;
    }
    double log_det = 2.0 * kPi * (q - q * std::log(q)) / std::sqrt(Delta) +
                     2.0 * std::log1p(-std::exp(-2.0 * kPi * std::sqrt(q / a))) -
                     4.0 * sum;
    return std::exp(log_det);
  }
  // Homogeneous branch: det = (1/a) exp[-4 zeta'(0) - pi sqrt(Delta)/(6a)
  //   - 4 sum sigma_1(n)/n cos(pi n b/a) e^{-pi n sqrt(Delta)/a}],
  // zeta'(0) = -ln(2 pi)/2.
  double sum = 0.0;
  for (int n = 1; n <= acc.max_terms; ++n) {
    double e = kPi * n * std::sqrt(Delta) / a;
    if (e > 700.0) break;
    double t = divisor_sigma(Complex(1.0, 0.0), n).real() / n *
               std::cos(kPi * n * b / a) * std::exp(-e);
    sum += t;
    if (std::abs(t) < 1e-18 && n > 3) break;
  }
  double log_det = 2.0 * std::log(2.0 * kPi) - kPi * std::sqrt(Delta) / (6.0 * a) -
                   4.0 * sum - std::log(a);
  return std::exp(log_det);
}

// Homogeneous 2-D determinant in Teichmueller form:
// det(tau1, tau2) = tau2/(4 pi^2 |tau|^2) exp[-4 zeta'(0) - pi tau2/(3|tau|^2)
//   - 4 sum sigma_1(n)/n cos(2 pi n tau1/|tau|^2) e^{-pi n tau2/|tau|^2}].
inline double det_torus_teichmuller(const TorusModuli2D& moduli) {
  moduli.validate();
  AccuracyTarget acc;
  double tau_sq = moduli.tau1 * moduli.tau1 + moduli.tau2 * moduli.tau2;
  double sum = 0.0;
  for (int n = 1; n <= acc.max_terms; ++n) {
    double e = kPi * n * moduli.tau2 / tau_sq;
    if (e > 700.0) break;
    double t = divisor_sigma(Complex(1.0, 0.0), n).real() / n *
               std::cos(2.0 * kPi * n * moduli.tau1 / tau_sq) * std::exp(-e);
    sum += t;
    if (std::abs(t) < 1e-18 && n > 3) break;
  }
  double log_val = std::log(moduli.tau2 / (4.0 * kPi * kPi * tau_sq)) +
                   2.0 * std::log(2.0 * kPi) - kPi * moduli.tau2 / (3.0 * tau_sq) -
                   4.0 * sum;
  return std::exp(log_val);
}

}  // namespace latzeta

#endif  // LATZETA_PHYSICS_HPP
