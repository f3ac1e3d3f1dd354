// Generic spectral zeta continuation from a raw spectrum via the Mellin /
// heat-kernel split, plus zeta determinants and the multiplicative anomaly.
#ifndef LATZETA_SPECTRAL_HPP
#define LATZETA_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "latzeta/lattice.hpp"
#include "latzeta/specfun.hpp"

namespace latzeta {

struct HeatTerm {
  double alpha = 0.0;
  double coeff = 0.0;
};

// Explicit spectrum (lambda_k, multiplicity) up to some lambda_max, together
// with the small-t heat-trace asymptotics theta(t) ~ sum_j c_j t^{alpha_j}.
struct SpectrumModel {
  std::vector<std::pair<double, int>> levels;  // sorted ascending in lambda
  std::vector<HeatTerm> heat;                  // alpha strictly increasing
  bool complete = false;  // the level list is the entire (finite) spectrum

  void validate() const {
    if (levels.empty()) throw DomainError("SpectrumModel: empty spectrum");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!(levels[i].first > 0.0) || levels[i].second < 1)
        throw DomainError("SpectrumModel: need lambda > 0, mult >= 1");
      if (i > 0 && levels[i].first < levels[i - 1].first)
        throw DomainError("SpectrumModel: levels must be sorted ascending");
    }
    for (std::size_t j = 1; j < heat.size(); ++j)
      if (!(heat[j].alpha > heat[j - 1].alpha))
        throw DomainError("SpectrumModel: heat exponents must increase strictly");
  }

  double lambda_min() const { return levels.front().first; }
  double lambda_max() const { return levels.back().first; }

  // theta(t) = sum d_k e^{-t lambda_k}; truncation tail is exponentially
  // small provided t >= coverage_t0().
  double theta(double t) const {
    double s = 0.0;
    for (const auto& [lam, mult] : levels) {
      double x = t * lam;
      if (x > 745.0) break;
      s += mult * std::exp(-x);
    }
    return s;
  }

  double heat_model(double t) const {
    double s = 0.0;
    for (const HeatTerm& h : heat) s += h.coeff * std::pow(t, h.alpha);
    return s;
  }

  // Smallest t at which the finite level list still represents theta to
  // near-roundoff (tail e^{-t lambda_max} below ~1e-16 of the leading term).
  double coverage_t0() const { return 38.0 / lambda_max(); }
};

struct AnomalyInput {
  SpectrumModel spec_A, spec_B, spec_AB;
};

namespace detail {

template <class Fn>
double adaptive_simpson_real(Fn&& f, double a, double b, double tol,
                             int max_depth = 40) {
  struct Seg {
    double a, b, fa, fm, fb, whole;
    int depth;
  };
  auto simp = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  double m0 = 0.5 * (a + b);
  std::vector<Seg> stack;
  {
    double fa = f(a), fm = f(m0), fb = f(b);
    stack.push_back({a, b, fa, fm, fb, simp(a, b, fa, fm, fb), 0});
  }
  double total = 0.0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double m = 0.5 * (s.a + s.b);
    double lm = 0.5 * (s.a + m), rm = 0.5 * (m + s.b);
    double flm = f(lm), frm = f(rm);
    double left = simp(s.a, m, s.fa, flm, s.fm);
    double right = simp(m, s.b, s.fm, frm, s.fb);
    double delta = left + right - s.whole;
    if (s.depth >= max_depth || std::abs(delta) <= 15.0 * tol * std::max(1e-3, (s.b - s.a) / (b - a))) {
      total += left + right + delta / 15.0;
    } else {
      stack.push_back({s.a, m, s.fa, flm, s.fm, left, s.depth + 1});
      stack.push_back({m, s.b, s.fm, frm, s.fb, right, s.depth + 1});
    }
  }
  return total;
}

template <class Fn>
Complex adaptive_simpson_cplx(Fn&& f, double a, double b, double tol) {
  double re = adaptive_simpson_real([&](double t) { return f(t).real(); }, a, b, tol);
  double im = adaptive_simpson_real([&](double t) { return f(t).imag(); }, a, b, tol);
  return {re, im};
}

}  // namespace detail

// Mellin-split continuation:
//   Gamma(s) zeta(s) = int_1^inf t^{s-1} theta
//                    + sum_j c_j/(s+alpha_j)
//                    + int_0^1 t^{s-1} (theta - sum_j c_j t^{alpha_j}).
// Poles exactly at s = -alpha_j with residue c_j/Gamma(-alpha_j).
inline ZetaValue spectral_zeta_mellin(const SpectrumModel& spec, Complex s,
                                      const AccuracyTarget& acc = {},
                                      double split = 1.0) {
  spec.validate();
  acc.validate();
  if (!(split > 0.0)) throw DomainError("spectral_zeta_mellin: split must be > 0");

  if (spec.complete) {
    // Finite spectrum: the Dirichlet sum is entire and exact.
    ZetaValue out;
    for (const auto& [lam, mult] : spec.levels)
      out.value += static_cast<double>(mult) * std::exp(-s * std::log(lam));
    out.err_estimate = 1e-15 * std::abs(out.value);
    return out;
  }

  double alpha_next = spec.heat.empty() ? 0.0 : spec.heat.back().alpha + 0.5;
  if (s.real() + alpha_next <= 0.25)
    throw ConvergenceError(
        "spectral_zeta_mellin: heat coefficients do not cover this s "
        "(insufficient heat depth)");

  for (const HeatTerm& h : spec.heat) {
    Complex loc(-h.alpha, 0.0);
    if (std::abs(s - loc) < 1e-12 && h.coeff != 0.0) {
      Complex rg = detail::rgamma(loc);
      if (std::abs(rg) > 1e-14)
        throw PoleError("spectral_zeta_mellin: pole at s = -alpha_j", loc,
                        h.coeff * rg);
    }
  }

  double t0 = std::min(split, spec.coverage_t0());
  double tol = 0.1 * acc.rel_tol;

  // Upper integral: theta decays like e^{-lambda_min t}.
  double T = split + 40.0 / spec.lambda_min();
  Complex upper = detail::adaptive_simpson_cplx(
      [&](double t) { return std::pow(t, s - 1.0) * spec.theta(t); }, split, T,
      tol);

  // Lower integral over [t0, split] of the heat-subtracted trace.
  Complex lower = detail::adaptive_simpson_cplx(
      [&](double t) {
        return std::pow(t, s - 1.0) * (spec.theta(t) - spec.heat_model(t));
      },
      t0, split, tol);

  // Remainder of the lower integral below t0, estimated from the first
  // uncovered heat order.
  double rem = 0.0;
  if (t0 > 0.0 && !spec.heat.empty()) {
    double c_last = std::abs(spec.heat.back().coeff);
    double expn = s.real() + alpha_next;
    if (expn > 0.0) rem = c_last * std::pow(t0, expn) / expn;
  }

  // int_0^split t^{s-1} t^{alpha_j} = split^{s+alpha_j}/(s+alpha_j).
  // At s = -alpha_j with alpha_j a nonnegative integer m the 1/(s+alpha_j)
  // singularity is cancelled by the zero of 1/Gamma(s); the finite limit
  // contributes (-1)^m m! c_m.
  Complex rg = detail::rgamma(s);
  Complex poles_sum(0.0, 0.0);
  Complex deflated(0.0, 0.0);
  for (const HeatTerm& h : spec.heat) {
    if (h.coeff == 0.0) continue;
    Complex denom = s + h.alpha;
    if (std::abs(denom) < 1e-9 && std::abs(detail::rgamma(Complex(-h.alpha, 0.0))) <= 1e-14) {
      int m = static_cast<int>(std::lround(h.alpha));
      double mfact = 1.0;
      for (int i = 2; i <= m; ++i) mfact *= i;
      deflated += ((m % 2 == 0) ? 1.0 : -1.0) * mfact * h.coeff;
      continue;
    }
    poles_sum += h.coeff * std::pow(split, s + h.alpha) / denom;
  }

  ZetaValue out;
  out.value = rg * (upper + lower + poles_sum) + deflated;
  out.err_estimate =
      std::abs(rg) * (rem + tol * (std::abs(upper) + std::abs(lower) + 1.0)) +
      1e-14 * std::abs(out.value);
  for (const HeatTerm& h : spec.heat) {
    Complex loc(-h.alpha, 0.0);
    double dist = std::abs(s - loc);
    if (dist < 0.01 && h.coeff != 0.0 && std::abs(detail::rgamma(loc)) > 1e-14) {
      out.nearest_pole = PoleInfo{loc, h.coeff * detail::rgamma(loc), dist};
      break;
    }
  }
  return out;
}

// ln det_zeta = -zeta'(0).  With M(s) = Gamma(s) zeta(s) = c_0/s + regular,
// zeta'(0) = gamma c_0 + [M(s) - c_0/s]_{s=0}, where c_0 is the heat
// coefficient at alpha = 0.
inline double zeta_log_det(const SpectrumModel& spec,
                           const AccuracyTarget& acc = {}, double split = 1.0) {
  spec.validate();
  acc.validate();
  if (spec.complete) {
    double out = 0.0;
    for (const auto& [lam, mult] : spec.levels) out += mult * std::log(lam);
    return out;
  }
  if (!(split > 0.0)) throw DomainError("zeta_log_det: split must be > 0");
  double alpha_next = spec.heat.empty() ? 0.0 : spec.heat.back().alpha + 0.5;
  if (alpha_next <= 0.25)
    throw ConvergenceError(
        "zeta_log_det: heat coefficients must extend past alpha = 0");

  double t0 = std::min(split, spec.coverage_t0());
  double tol = 0.1 * acc.rel_tol;
  double T = split + 40.0 / spec.lambda_min();

  double upper = detail::adaptive_simpson_real(
      [&](double t) { return spec.theta(t) / t; }, split, T, tol);
  double lower = detail::adaptive_simpson_real(
      [&](double t) { return (spec.theta(t) - spec.heat_model(t)) / t; }, t0,
      split, tol);

  double c0 = 0.0, pole_free = 0.0;
  for (const HeatTerm& h : spec.heat) {
    if (h.alpha == 0.0)
      c0 += h.coeff;
    else
      pole_free += h.coeff * std::pow(split, h.alpha) / h.alpha;
  }
  double zeta_prime0 =
      kEulerGamma * c0 + c0 * std::log(split) + upper + lower + pole_free;
  return -zeta_prime0;
}

// delta(A, B) = ln det(AB) - ln det A - ln det B = -zeta'_AB(0) + zeta'_A(0)
// + zeta'_B(0); identically zero for finite spectra.
inline double multiplicative_anomaly(const AnomalyInput& input,
                                     const AccuracyTarget& acc = {}) {
  return zeta_log_det(input.spec_AB, acc) - zeta_log_det(input.spec_A, acc) -
         zeta_log_det(input.spec_B, acc);
}

// ---- Shipped spectrum generators (torus and quartic-product families) ----

enum class LineMode { FullWithOrigin, FullWithoutOrigin, HalfLine };

// lambda = a n^2 + q over the chosen index set, with exact theta-function
// small-t asymptotics (Jacobi duality makes the corrections exponentially
// small, so the listed powers are the complete asymptotic series).
inline SpectrumModel spectrum_1d(double a, double q, LineMode mode,
                                 double lambda_max, int heat_orders = 8) {
  if (!(a > 0.0) || !(q >= 0.0))
    throw DomainError("spectrum_1d: need a > 0, q >= 0");
  SpectrumModel spec;
  if (mode == LineMode::FullWithOrigin) {
    if (!(q > 0.0)) throw DomainError("spectrum_1d: origin mode needs q > 0");
    spec.levels.push_back({q, 1});
  }
  for (int n = 1;; ++n) {
    double lam = a * n * n + q;
    if (lam > lambda_max) break;
    spec.levels.push_back({lam, mode == LineMode::HalfLine ? 1 : 2});
  }
  double half = (mode == LineMode::HalfLine) ? 0.5 : 1.0;
  double fact = 1.0;
  for (int j = 0; j < heat_orders; ++j) {
    if (j > 0) fact *= j;
    double cq = std::pow(-q, j) / fact;
    spec.heat.push_back({-0.5 + j, half * std::sqrt(kPi / a) * cq});
  }
  if (mode != LineMode::FullWithOrigin) {
    // subtract the n = 0 mode e^{-qt} from the full-line asymptotics
    std::vector<HeatTerm> merged;
    fact = 1.0;
    for (int j = 0; j < heat_orders; ++j) {
      if (j > 0) fact *= j;
      merged.push_back({static_cast<double>(j),
                        -half * std::pow(-q, j) / fact});
    }
    for (const HeatTerm& h : merged) spec.heat.push_back(h);
    std::sort(spec.heat.begin(), spec.heat.end(),
              [](const HeatTerm& x, const HeatTerm& y) { return x.alpha < y.alpha; });
  }
  return spec;
}

// lambda = Q(n) + q over n in Z^2 (origin included; requires q > 0), with
// Q(n) = (1/2) n^T A n and heat trace (2 pi / sqrt(det A)) t^{-1} e^{-qt}.
inline SpectrumModel torus_spectrum_2d(const QuadraticFormSpec& form, double q,
                                       double lambda_max, int heat_orders = 8) {
  form.validate();
  if (form.dim() != 2) throw DomainError("torus_spectrum_2d: need p = 2");
  if (!(q > 0.0)) throw DomainError("torus_spectrum_2d: need q > 0");
  double lam_min_dir = form.min_eigenvalue();
  int R = static_cast<int>(std::ceil(std::sqrt(2.0 * lambda_max / lam_min_dir))) + 1;
  std::vector<double> lams;
  Vector x(2);
  for (int n1 = -R; n1 <= R; ++n1)
    for (int n2 = -R; n2 <= R; ++n2) {
      x[0] = n1;
      x[1] = n2;
      double lam = form.q_value(x) + q;
      if (lam <= lambda_max) lams.push_back(lam);
    }
  std::sort(lams.begin(), lams.end());
  SpectrumModel spec;
  for (double lam : lams) {
    if (!spec.levels.empty() && std::abs(spec.levels.back().first - lam) < 1e-12 * lam)
      ++spec.levels.back().second;
    else
      spec.levels.push_back({lam, 1});
  }
  double pref = 2.0 * kPi / std::sqrt(form.det());
  double fact = 1.0;
  for (int j = 0; j < heat_orders; ++j) {
    if (j > 0) fact *= j;
    spec.heat.push_back({-1.0 + j, pref * std::pow(-q, j) / fact});
  }
  return spec;
}

// Quartic product spectra for the anomaly checks: lambda = (base + q1)(base + q2)
// with base = n^2 (1-D full line, origin included) or n1^2 + n2^2 (2-D).
inline SpectrumModel product_spectrum_1d(double q1, double q2, double lambda_max,
                                         double alpha_cap = 4.0) {
  if (!(q1 > 0.0) || !(q2 > 0.0))
    throw DomainError("product_spectrum_1d: need q1, q2 > 0");
  SpectrumModel spec;
  spec.levels.push_back({q1 * q2, 1});
  for (int n = 1;; ++n) {
    double lam = (static_cast<double>(n) * n + q1) * (static_cast<double>(n) * n + q2);
    if (lam > lambda_max) break;
    spec.levels.push_back({lam, 2});
  }
  // theta(t) ~ sum_{k,m} Gamma((2k+1)/4)/2 (-(q1+q2))^k (-q1 q2)^m /(k! m!)
  //            t^{(2k-1)/4 + m}
  for (int k = 0; k <= 32; ++k)
    for (int m = 0; m <= 32; ++m) {
      double alpha = 0.25 * (2 * k - 1) + m;
      if (alpha > alpha_cap) continue;
      double c = 0.5 * std::tgamma(0.25 * (2 * k + 1)) *
                 std::pow(-(q1 + q2), k) * std::pow(-q1 * q2, m) /
                 (std::exp(std::lgamma(k + 1.0)) * std::exp(std::lgamma(m + 1.0)));
      spec.heat.push_back({alpha, c});
    }
  std::sort(spec.heat.begin(), spec.heat.end(),
            [](const HeatTerm& x, const HeatTerm& y) { return x.alpha < y.alpha; });
  // merge coincident exponents
  std::vector<HeatTerm> merged;
  for (const HeatTerm& h : spec.heat) {
    if (!merged.empty() && std::abs(merged.back().alpha - h.alpha) < 1e-12)
      merged.back().coeff += h.coeff;
    else
      merged.push_back(h);
  }
  spec.heat = std::move(merged);
  return spec;
}

inline SpectrumModel product_spectrum_2d(double q1, double q2, double lambda_max,
                                         double alpha_cap = 4.0) {
  if (!(q1 > 0.0) || !(q2 > 0.0))
    throw DomainError("product_spectrum_2d: need q1, q2 > 0");
  double base_max = std::sqrt(lambda_max);  // (base+q)^2 envelope
  int R = static_cast<int>(std::ceil(std::sqrt(base_max))) + 1;
  std::vector<double> lams;
  for (int n1 = -R; n1 <= R; ++n1)
    for (int n2 = -R; n2 <= R; ++n2) {
      double b = static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2;
      double lam = (b + q1) * (b + q2);
      if (lam <= lambda_max) lams.push_back(lam);
    }
  std::sort(lams.begin(), lams.end());
  SpectrumModel spec;
  for (double lam : lams) {
    if (!spec.levels.empty() && std::abs(spec.levels.back().first - lam) < 1e-12 * lam)
      ++spec.levels.back().second;
    else
      spec.levels.push_back({lam, 1});
  }
  // theta(t) ~ (pi/2) sum_{k,m} Gamma((k+1)/2) (-(q1+q2))^k (-q1 q2)^m/(k! m!)
  //            t^{(k-1)/2 + m}
  for (int k = 0; k <= 32; ++k)
    for (int m = 0; m <= 32; ++m) {
      double alpha = 0.5 * (k - 1) + m;
      if (alpha > alpha_cap) continue;
      double c = 0.5 * kPi * std::tgamma(0.5 * (k + 1)) *
                 std::pow(-(q1 + q2), k) * std::pow(-q1 * q2, m) /
                 (std::exp(std::lgamma(k + 1.0)) * std::exp(std::lgamma(m + 1.0)));
      spec.heat.push_back({alpha, c});
    }
  std::sort(spec.heat.begin(), spec.heat.end(),
            [](const HeatTerm& x, const HeatTerm& y) { return x.alpha < y.alpha; });
  std::vector<HeatTerm> merged;
  for (const HeatTerm& h : spec.heat) {
    if (!merged.empty() && std::abs(merged.back().alpha - h.alpha) < 1e-12)
      merged.back().coeff += h.coeff;
    else
      merged.push_back(h);
  }
  spec.heat = std::move(merged);
  return spec;
}

// Finite spectra (e.g. {2, 3}); zeta and det are exact, no regularization.
inline SpectrumModel finite_spectrum(const std::vector<double>& lambdas) {
  SpectrumModel spec;
  spec.complete = true;
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  for (double lam : sorted) {
    if (!(lam > 0.0)) throw DomainError("finite_spectrum: lambdas must be > 0");
    spec.levels.push_back({lam, 1});
  }
  spec.heat.push_back({0.0, static_cast<double>(sorted.size())});
  return spec;
}

}  // namespace latzeta

#endif  // LATZETA_SPECTRAL_HPP
