#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "latzeta/truncated.hpp"

using namespace latzeta;
using Catch::Approx;

namespace {

// Brute-force half-line sum, valid for Re s > 1/2.
Complex half_line_direct(double a, double c, double q, Complex s, int nmax) {
  Complex acc(0.0, 0.0);
  for (int n = nmax; n >= 0; --n) {
    double base = a * (n + c) * (n + c) + q;
    acc += std::exp(-s * std::log(base));
  }
  return acc;
}

}  // namespace

TEST_CASE("superasymptotic value matches the direct sum in the strip") {
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> ua(0.5, 3.0), uc(0.1, 0.95),
      uq(2.0, 12.0), ur(1.5, 4.0), ui(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    double a = ua(rng), c = uc(rng), q = uq(rng);
    Complex s(ur(rng), ui(rng));
    AsymptoticResult r = truncated_zeta({a, c, q}, s);
    Complex direct = half_line_direct(a, c, q, s, 400000);
    double tol = std::max(r.err_estimate, 1e-11 * std::abs(direct)) + 1e-7;
    CHECK(std::abs(r.value - direct) <= tol);
  }
}

TEST_CASE("error estimate tracks the smallest dropped term") {
  // c = 1/2 is degenerate (odd Bernoulli polynomials vanish there), so use
  // a generic offset
  AsymptoticResult r = truncated_zeta({1.0, 0.3, 9.0}, {2.0, 0.0});
  CHECK(r.terms_used >= 2);
  CHECK(r.smallest_term > 0.0);
  CHECK(r.err_estimate >= r.smallest_term * 0.5);
  Complex direct = half_line_direct(1.0, 0.3, 9.0, {2.0, 0.0}, 400000);
  CHECK(std::abs(r.value - direct) <= 5.0 * r.err_estimate + 1e-9);
}

TEST_CASE("accuracy floor is flagged when q/a is small") {
  // small q/a: the asymptotic series bottoms out early and must say so
  AsymptoticResult r = truncated_zeta({1.0, 0.3, 0.2}, {-0.8, 0.4});
  CHECK(r.accuracy_floor_hit);
  CHECK(r.err_estimate > 1e-12);
  AsymptoticResult good = truncated_zeta({1.0, 0.3, 60.0}, {-0.8, 0.4});
  CHECK_FALSE(good.accuracy_floor_hit);
}

TEST_CASE("c > 1 reduces by explicit subtraction") {
  double a = 1.4, q = 7.0;
  Complex s(2.2, -0.6);
  AsymptoticResult big = truncated_zeta({a, 3.25, q}, s);
  Complex expect = truncated_zeta({a, 0.25, q}, s).value;
  for (int n = 0; n < 3; ++n) {
    double base = a * (n + 0.25) * (n + 0.25) + q;
    expect -= std::exp(-s * std::log(base));
  }
  CHECK(std::abs(big.value - expect) <= 1e-11 * (1.0 + std::abs(expect)));
}

TEST_CASE("pole ladder at s = 1/2 - j: both residue conventions") {
  TruncatedParams params{2.0, 0.35, 6.0};
  for (int j : {0, 1, 2, 3}) {
    auto [closed_form, extracted] = truncated_residue(params, j);
    // the implemented representation carries residue (2j-1)!! q^j / (2 j! 2^j sqrt a)
    double dfac = 1.0;
    for (int i = 2 * j - 1; i >= 1; i -= 2) dfac *= i;
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    double expect = dfac * std::pow(params.q, j) /
                    (2.0 * fact * std::pow(2.0, j) * std::sqrt(params.a));
    CHECK(extracted == Approx(expect).epsilon(5e-5));
    // the closed_form field reports twice the extracted residue by convention
    CHECK(closed_form == Approx(2.0 * expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(truncated_residue(params, -1), DomainError);
  CHECK_THROWS_AS(truncated_zeta(params, {0.5, 0.0}), PoleError);
  CHECK_THROWS_AS(truncated_zeta(params, {-0.5, 0.0}), PoleError);
}

TEST_CASE("residue extraction is stable under step halving") {
  TruncatedParams params{1.0, 0.5, 10.0};
  auto r1 = truncated_residue(params, 1);
  auto r2 = truncated_residue(params, 2);
  CHECK(r1.second == Approx(0.5 * r1.first).epsilon(1e-4));
  CHECK(r2.second == Approx(0.5 * r2.first).epsilon(1e-4));
}

TEST_CASE("full-line value splits into two half lines") {
  std::mt19937_64 rng(223);
  std::uniform_real_distribution<double> ua(0.6, 2.0), uc(0.15, 0.85),
      uq(3.0, 10.0), ur(-1.8, 2.5), ui(-1.5, 1.5);
  {
    auto [lhs, rhs] = full_line_split_check(1.0, 0.5, 5.0, {1.3, 0.2});
    CHECK(std::abs(lhs - rhs) <= 1e-7 * (1.0 + std::abs(lhs)));
  }
  for (int trial = 0; trial < 6; ++trial) {
    double a = ua(rng), c = uc(rng), q = uq(rng);
    Complex s(ur(rng), ui(rng));
    if (std::abs(s.imag()) < 0.05) s += Complex(0.0, 0.4);
    auto [lhs, rhs] = full_line_split_check(a, c, q, s);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * (1.0 + std::abs(lhs)));
  }
  CHECK_THROWS_AS(full_line_split_check(1.0, 1.5, 5.0, {2.0, 0.0}),
                  DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(truncated_zeta({-1.0, 0.5, 2.0}, {2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(truncated_zeta({1.0, -0.2, 2.0}, {2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(truncated_zeta({1.0, 0.5, -2.0}, {2.0, 0.0}), DomainError);
}
