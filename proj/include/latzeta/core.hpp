// Core value types and error classes shared by all evaluators.
#ifndef LATZETA_CORE_HPP
#define LATZETA_CORE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace latzeta {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Requested accuracy for series/quadrature evaluators.
struct AccuracyTarget {
  double rel_tol = 1e-12;
  double abs_floor = 1e-280;
  int max_terms = 2'000'000;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0) ||
        rel_tol < 10.0 * std::numeric_limits<double>::epsilon())
      throw std::invalid_argument("AccuracyTarget: rel_tol out of range");
    if (!(abs_floor >= 0.0))
      throw std::invalid_argument("AccuracyTarget: abs_floor must be >= 0");
    if (max_terms < 8)
      throw std::invalid_argument("AccuracyTarget: max_terms must be >= 8");
  }
};

struct PoleInfo {
  Complex location;
  Complex residue;
  double distance = 0.0;
};

// Universal return type: value, error estimate, nearby-pole bookkeeping.
struct ZetaValue {
  Complex value;
  double err_estimate = 0.0;
  std::optional<PoleInfo> nearest_pole;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation requested at (or numerically on top of) a simple pole.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, Complex location, Complex residue)
      : DomainError(what), location(location), residue(residue) {}
  Complex location;
  Complex residue;
};

class SingularTermError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace latzeta

#endif  // LATZETA_CORE_HPP
