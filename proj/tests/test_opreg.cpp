#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "latzeta/opreg.hpp"

using namespace latzeta;
using Catch::Approx;

namespace {

Matrix random_spd(int N, std::mt19937_64& rng, double shift = 2.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix B(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) B(i, j) = nd(rng);
  return Matrix(B * B.transpose() + shift * Matrix::Identity(N, N));
}

}  // namespace

TEST_CASE("matrix function cache: powers and logs") {
  std::mt19937_64 rng(301);
  Matrix H = random_spd(4, rng);
  MatrixFunctionCache cache(H);
  CHECK((cache.power(1.0) - H).norm() <= 1e-12 * H.norm());
  CHECK((cache.power(2.0) - Matrix(H * H)).norm() <= 1e-11 * (H * H).norm());
  CHECK((cache.power(-1.0) - Matrix(H.inverse())).norm() <=
        1e-11 * H.inverse().norm());
  // exp(m log H) == H^m through the same eigenbasis
  Matrix L = cache.log();
  Eigen::SelfAdjointEigenSolver<Matrix> es(L);
  Matrix expL = es.eigenvectors() *
                es.eigenvalues().array().exp().matrix().asDiagonal() *
                es.eigenvectors().transpose();
  CHECK((expL - H).norm() <= 1e-10 * H.norm());
  Matrix indef = Matrix::Identity(2, 2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(MatrixFunctionCache(indef), DomainError);
}

TEST_CASE("central stencil weights recover polynomial derivatives") {
  // d/dx x^3 at 0 is 0; d2/dx2 x^2 is 2; d3/dx3 x^3 is 6
  for (int n : {1, 2, 3, 4}) {
    auto f = [n](double x) {
      return Matrix(Matrix::Constant(1, 1, std::pow(x, n)));
    };
    Matrix d = detail::matrix_nth_derivative(f, n, 0.05);
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;
    CHECK(d(0, 0) == Approx(nfact).epsilon(1e-7));
  }
}

TEST_CASE("stencil error shrinks at least quadratically in h") {
  // the symmetric 5-point grids are fourth-order for these derivatives
  auto f = [](double x) { return Matrix(Matrix::Constant(1, 1, std::exp(x))); };
  double e1 = std::abs(detail::matrix_nth_derivative(f, 2, 0.2)(0, 0) - 1.0);
  double e2 = std::abs(detail::matrix_nth_derivative(f, 2, 0.1)(0, 0) - 1.0);
  CHECK(e2 < e1);
  double ratio = e1 / e2;
  CHECK(ratio > 3.5);
  CHECK(ratio == Approx(16.0).epsilon(0.4));
}

TEST_CASE("regularized power recovers H^{-m}") {
  std::mt19937_64 rng(307);
  for (int n : {1, 2, 3}) {
    for (int m : {1, 2}) {
      Matrix H = random_spd(4, rng);
      Vector alphas = Vector::Zero(n);
      ORProblem prob{H, m, n, alphas};
      ORResult r = or_regularized_power(prob, 0.02);
      Matrix oracle = MatrixFunctionCache(H).power(-static_cast<double>(m));
      CHECK((r.value - oracle).norm() <= 1e-6 * oracle.norm());
    }
  }
}

TEST_CASE("the alpha coefficients are inert") {
  std::mt19937_64 rng(311);
  Matrix H = random_spd(3, rng);
  int n = 2, m = 1;
  ORResult base = or_regularized_power({H, m, n, Vector::Zero(n)}, 0.02);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 4; ++trial) {
    Vector alphas(n);
    alphas << u(rng), u(rng);
    ORResult r = or_regularized_power({H, m, n, alphas}, 0.02);
    CHECK((r.value - base.value).norm() <= 1e-6 * base.value.norm());
  }
}

TEST_CASE("multi-power product collapses to the total power") {
  std::mt19937_64 rng(313);
  Matrix H = random_spd(3, rng);
  ORResult r = or_multi_power(H, {1, 2}, 2, Vector::Zero(2), 0.02);
  Matrix oracle = MatrixFunctionCache(H).power(-3.0);
  CHECK((r.value - oracle).norm() <= 1e-6 * oracle.norm());
}

TEST_CASE("schwinger representation of the logarithm") {
  std::mt19937_64 rng(317);
  Matrix H = random_spd(4, rng);
  Matrix oracle = MatrixFunctionCache(H).log();
  for (int n : {1, 2, 3}) {
    ORResult r = schwinger_log(H, n, 0.02);
    CHECK((r.value - oracle).norm() <= 1e-6 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("derivative bridge on diagonal operators") {
  Matrix H = Matrix::Zero(3, 3);
  H(0, 0) = 0.5;
  H(1, 1) = 2.0;
  H(2, 2) = 7.0;
  for (int m : {1, 2, 3}) {
    auto [lhs, rhs] = feynman_schwinger_bridge(H, m);
    CHECK((lhs - rhs).norm() <= 1e-5 * lhs.norm());
  }
  std::mt19937_64 rng(331);
  Matrix nondiag = random_spd(3, rng);
  CHECK_THROWS_AS(feynman_schwinger_bridge(nondiag, 1), DomainError);
}

TEST_CASE("laurent fit shows no negative powers") {
  std::mt19937_64 rng(337);
  Matrix H = random_spd(3, rng);
  for (int n : {1, 2}) {
    // fitted powers run from eps^{-n} (index 0) to eps^{n+1}; the sampled
    // function is (eps^n/n!) tr H^{-eps-1}, so everything below eps^n
    // must vanish and the eps^n coefficient carries tr H^{-1}/n!
    auto coeffs = or_laurent_report(H, 1, n);
    REQUIRE(static_cast<int>(coeffs.size()) == 2 * (n + 1));
    double nfact = (n == 1) ? 1.0 : 2.0;
    double payload = MatrixFunctionCache(H).power(-1.0).trace() / nfact;
    for (int k = 0; k < 2 * n; ++k)
      CHECK(std::abs(coeffs[k]) <= 1e-3 * std::max(1.0, std::abs(payload)));
    CHECK(coeffs[2 * n] == Approx(payload).epsilon(2e-2));
  }
}

TEST_CASE("validation and step-size domain") {
  std::mt19937_64 rng(341);
  Matrix H = random_spd(3, rng);
  CHECK_THROWS_AS(or_regularized_power({H, 0, 1, Vector::Zero(1)}, 0.02),
                  DomainError);
  CHECK_THROWS_AS(or_regularized_power({H, 1, 0, Vector::Zero(0)}, 0.02),
                  DomainError);
  CHECK_THROWS_AS(or_regularized_power({H, 1, 1, Vector::Zero(2)}, 0.02),
                  DomainError);
  CHECK_THROWS_AS(or_regularized_power({H, 1, 1, Vector::Zero(1)}, 0.5),
                  DomainError);
  CHECK_THROWS_AS(or_regularized_power({H, 1, 1, Vector::Zero(1)}, 1e-6),
                  DomainError);
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(or_regularized_power({asym, 1, 1, Vector::Zero(1)}, 0.02),
                  DomainError);
}
