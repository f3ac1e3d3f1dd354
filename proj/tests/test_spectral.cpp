#include <catch2/catch_amalgamated.hpp>

#include "latzeta/epstein.hpp"
#include "latzeta/spectral.hpp"

using namespace latzeta;
using Catch::Approx;

TEST_CASE("half-line n^2 spectrum reproduces zeta(2s)") {
  SpectrumModel spec = spectrum_1d(1.0, 0.0, LineMode::HalfLine, 1e6);
  // convergent point: exact Dirichlet comparison
  ZetaValue z2 = spectral_zeta_mellin(spec, {2.0, 0.0});
  CHECK(z2.value.real() == Approx(riemann_zeta({4.0, 0.0}).value.real())
                               .epsilon(1e-9));
  // continued point: zeta(-1) = -1/12
  ZetaValue zm = spectral_zeta_mellin(spec, {-0.5, 0.0});
  CHECK(zm.value.real() == Approx(-1.0 / 12.0).margin(1e-8));
}

TEST_CASE("heat-kernel poles are reported with residue c_j / Gamma(-alpha_j)") {
  // half line, a=1, q=2: alpha_0 = -1/2, c_0 = sqrt(pi)/2; pole at s = 1/2
  SpectrumModel spec = spectrum_1d(1.0, 2.0, LineMode::HalfLine, 1e6);
  CHECK_THROWS_AS(spectral_zeta_mellin(spec, {0.5, 0.0}), PoleError);
  try {
    spectral_zeta_mellin(spec, {0.5, 0.0});
  } catch (const PoleError& e) {
    CHECK(e.location.real() == Approx(0.5));
    // residue = c_0 / Gamma(1/2) = (sqrt(pi)/2)/sqrt(pi) = 1/2
    CHECK(e.residue.real() == Approx(0.5).epsilon(1e-12));
  }
  // alpha = integer >= 0 terms have 1/Gamma(-alpha) = 0: no pole there
  CHECK_NOTHROW(spectral_zeta_mellin(spec, {0.0, 0.0}));
}

TEST_CASE("continuation matches the 1-D closed form across the strip") {
  double a = 1.0, q = 3.0;
  SpectrumModel spec =
      spectrum_1d(a, q, LineMode::FullWithoutOrigin, 2e6);
  for (double sr : {1.7, 0.8, 0.2, -0.3}) {
    Complex s(sr, 0.0);
    ZetaValue mellin = spectral_zeta_mellin(spec, s);
    ZetaValue closed = eval_1d_inhomogeneous(a, q, s);
    CHECK(std::abs(mellin.value - closed.value) <=
          1e-7 * (1.0 + std::abs(closed.value)));
  }
}

TEST_CASE("split point does not change the continuation") {
  SpectrumModel spec = spectrum_1d(1.0, 3.0, LineMode::HalfLine, 2e6);
  Complex s(-0.3, 0.4);
  Complex v1 = spectral_zeta_mellin(spec, s, {}, 1.0).value;
  Complex v2 = spectral_zeta_mellin(spec, s, {}, 0.5).value;
  CHECK(std::abs(v1 - v2) <= 1e-8 * (1.0 + std::abs(v1)));
}

TEST_CASE("insufficient heat expansion fails loudly") {
  SpectrumModel spec = spectrum_1d(1.0, 3.0, LineMode::HalfLine, 2e6, 2);
  CHECK_THROWS_AS(spectral_zeta_mellin(spec, {-1.3, 0.0}), ConvergenceError);
}

TEST_CASE("finite spectra use exact sums") {
  SpectrumModel spec = finite_spectrum({2.0, 3.0});
  CHECK(spec.complete);
  Complex s(1.5, -0.7);
  Complex expect = std::pow(Complex(2.0, 0.0), -s) + std::pow(Complex(3.0, 0.0), -s);
  CHECK(std::abs(spectral_zeta_mellin(spec, s).value - expect) <=
        1e-13 * std::abs(expect));
  CHECK(zeta_log_det(spec) == Approx(std::log(6.0)).epsilon(1e-13));
}

TEST_CASE("log det of the n^2 half-line spectrum is ln 2 pi") {
  // zeta(s) = zeta_R(2s) so zeta'(0) = 2 zeta_R'(0) = -ln 2 pi
  SpectrumModel spec = spectrum_1d(1.0, 0.0, LineMode::HalfLine, 2e6);
  CHECK(zeta_log_det(spec) == Approx(std::log(2.0 * kPi)).epsilon(1e-7));
  // split-point independence of the determinant
  CHECK(zeta_log_det(spec, {}, 0.5) ==
        Approx(std::log(2.0 * kPi)).epsilon(1e-7));
}

TEST_CASE("log det agrees with the closed-form derivative route") {
  // full line without origin, a=1, q=2: ln det = -zeta'(0)
  double q = 2.0;
  SpectrumModel spec = spectrum_1d(1.0, q, LineMode::FullWithoutOrigin, 2e6);
  double lndet = zeta_log_det(spec);
  // central difference of the closed-form continuation at 0
  double h = 1e-5;
  double d = (eval_1d_inhomogeneous(1.0, q, {h, 0.0}).value.real() -
              eval_1d_inhomogeneous(1.0, q, {-h, 0.0}).value.real()) /
             (2.0 * h);
  CHECK(lndet == Approx(-d).epsilon(1e-6));
}

TEST_CASE("multiplicative anomaly vanishes for finite spectra") {
  AnomalyInput in{finite_spectrum({2.0, 5.0, 11.0}),
                  finite_spectrum({3.0, 7.0, 13.0}),
                  finite_spectrum({6.0, 35.0, 143.0})};
  CHECK(std::abs(multiplicative_anomaly(in)) < 1e-12);
}

TEST_CASE("anomaly of a 1-D operator pair") {
  // A = -d^2 + q1, B = -d^2 + q2 on the half line; AB has eigenvalues
  // (n^2+q1)(n^2+q2).  The anomaly is finite and the pipeline must produce
  // a consistent small value.
  double q1 = 1.0, q2 = 2.0;
  double lmax = 1e5;
  SpectrumModel sa = spectrum_1d(1.0, q1, LineMode::FullWithOrigin, lmax);
  SpectrumModel sb = spectrum_1d(1.0, q2, LineMode::FullWithOrigin, lmax);
  SpectrumModel sab = product_spectrum_1d(q1, q2, lmax * lmax);
  AnomalyInput in{sa, sb, sab};
  double delta = multiplicative_anomaly(in);
  // symmetric definition: swapping A and B leaves the anomaly unchanged
  AnomalyInput sw{sb, sa, sab};
  CHECK(multiplicative_anomaly(sw) == Approx(delta).margin(1e-6));
  CHECK(std::abs(delta) < 1.0);
  CHECK(std::isfinite(delta));
}

TEST_CASE("spectrum model validation") {
  SpectrumModel empty;
  CHECK_THROWS_AS(empty.validate(), DomainError);
  SpectrumModel bad = finite_spectrum({3.0, 2.0});  // sorted by builder
  CHECK_NOTHROW(bad.validate());
  SpectrumModel neg;
  neg.levels = {{-1.0, 1}};
  CHECK_THROWS_AS(neg.validate(), DomainError);
}

TEST_CASE("theta and heat model agree in the matched window") {
  SpectrumModel spec = spectrum_1d(1.0, 1.0, LineMode::HalfLine, 2e6);
  for (double t : {0.02, 0.05, 0.1}) {
    double theta = spec.theta(t);
    double model = spec.heat_model(t);
    CHECK(theta == Approx(model).epsilon(1e-9));
  }
}
