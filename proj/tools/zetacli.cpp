// zetacli: command-line front end for the latzeta evaluators.
// JSON results on stdout (deterministic, 17 significant digits),
// diagnostics on stderr.  Exit codes: 0 ok, 1 schema error,
// 2 pole/domain error, 3 convergence failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "latzeta/latzeta.hpp"

using json = nlohmann::json;
using namespace latzeta;

namespace {

// Deterministic number formatting: 17 significant digits.
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Minimal ordered JSON writer so float formatting is byte-stable.
struct JsonWriter {
  std::ostringstream os;
  bool first = true;

  void open() { os << "{"; first = true; }
  void close() { os << "}"; }
  void key(const std::string& k) {
    if (!first) os << ",";
    first = false;
    os << '"' << k << "\":";
  }
  void field(const std::string& k, double v) { key(k); os << fmt(v); }
  void field(const std::string& k, int v) { key(k); os << v; }
  void field(const std::string& k, bool v) { key(k); os << (v ? "true" : "false"); }
  void field(const std::string& k, const std::string& v) { key(k); os << '"' << v << '"'; }
  void field_cplx(const std::string& k, Complex v) {
    key(k);
    os << "{\"re\":" << fmt(v.real()) << ",\"im\":" << fmt(v.imag()) << "}";
  }
  void field_null(const std::string& k) { key(k); os << "null"; }
  void raw(const std::string& k, const std::string& r) { key(k); os << r; }
};

Complex parse_complex(const std::string& text) {
  // Accept forms like "3", "-1.5", "2+0.3i", "2-0.3i", "1e-2+4i".
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw DomainError("empty complex literal");
  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    // find the split between real and imaginary parts
    for (std::size_t i = s.size(); i-- > 1;) {
      char ch = s[i];
      if ((ch == '+' || ch == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        double re = std::stod(s.substr(0, i));
        std::string imtxt = s.substr(i);
        double im = (imtxt == "+" || imtxt == "-") ? (imtxt == "+" ? 1.0 : -1.0)
                                                   : std::stod(imtxt);
        return {re, im};
      }
    }
    return {0.0, s.empty() || s == "+" ? 1.0 : (s == "-" ? -1.0 : std::stod(s))};
  }
  return {std::stod(s), 0.0};
}

Matrix parse_matrix(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_array() || j.empty()) throw DomainError("matrix must be a nested array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Matrix A(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw DomainError("matrix rows must have equal length");
    for (int c = 0; c < cols; ++c) A(r, c) = j[r][c].get<double>();
  }
  return A;
}

Vector parse_vector(const std::string& text) {
  json j = json::parse(text);
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

std::string matrix_json(const Matrix& A) {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < A.rows(); ++r) {
    if (r) os << ",";
    os << "[";
    for (int c = 0; c < A.cols(); ++c) {
      if (c) os << ",";
      os << fmt(A(r, c));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

SpectrumModel load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spectrum file: " + path);
  json j = json::parse(in);
  SpectrumModel spec;
  for (const auto& e : j.at("eigenvalues"))
    spec.levels.push_back({e.at("lambda").get<double>(),
                           e.value("mult", 1)});
  for (const auto& h : j.value("heat", json::array()))
    spec.heat.push_back({h.at("alpha").get<double>(), h.at("coeff").get<double>()});
  spec.complete = j.value("complete", false);
  std::sort(spec.levels.begin(), spec.levels.end());
  std::sort(spec.heat.begin(), spec.heat.end(),
            [](const HeatTerm& a, const HeatTerm& b) { return a.alpha < b.alpha; });
  return spec;
}

void emit_zeta_result(JsonWriter& w, const ZetaValue& z) {
  w.field_cplx("value", z.value);
  w.field("err_estimate", z.err_estimate);
  if (z.nearest_pole) {
    w.key("nearest_pole");
    w.os << "{\"location\":{\"re\":" << fmt(z.nearest_pole->location.real())
         << ",\"im\":" << fmt(z.nearest_pole->location.imag())
         << "},\"residue\":{\"re\":" << fmt(z.nearest_pole->residue.real())
         << ",\"im\":" << fmt(z.nearest_pole->residue.imag())
         << "},\"distance\":" << fmt(z.nearest_pole->distance) << "}";
  } else {
    w.field_null("nearest_pole");
  }
}

int run_selftest(unsigned seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
  };

  {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      Complex s(u(rng), u(rng));
      if (detail::is_nonpositive_integer(s) || detail::is_nonpositive_integer(s + 1.0))
        continue;
      Complex lhs = complex_gamma(s + 1.0);
      Complex rhs = s * complex_gamma(s);
      if (std::abs(lhs - rhs) > 1e-11 * std::abs(lhs)) ok = false;
    }
    check("gamma recurrence", ok);
  }
  {
    ZetaValue z = riemann_zeta(Complex(2.0, 0.0));
    check("zeta(2) = pi^2/6",
          std::abs(z.value.real() - kPi * kPi / 6.0) < 1e-13);
  }
  {
    Complex k = bessel_k(Complex(0.5, 0.0), 2.0);
    double exact = std::sqrt(kPi / 4.0) * std::exp(-2.0);
    check("K_{1/2} closed form", std::abs(k.real() - exact) < 1e-10 * exact);
  }
  {
    QuadraticFormSpec f{2.0 * Matrix::Identity(2, 2)};
    EpsteinParams params{f, Vector::Zero(2), 1.0};
    AccuracyTarget tight;
    tight.rel_tol = 1e-13;
    ZetaValue a = epstein_inhomogeneous(params, Complex(4.0, 0.0));
    ZetaValue b = direct_lattice_sum(params, Complex(4.0, 0.0), true, 80, tight);
    check("epstein oracle (p=2, s=4)",
          std::abs(a.value - b.value) < 1e-10 * std::abs(a.value));
  }
  {
    auto [lhs, rhs] = jacobi_theta_check(Complex(0.5, 0.0), Complex(1.0, 0.0));
    check("jacobi identity", std::abs(lhs - rhs) < 1e-13);
  }
  {
    AnomalyInput in{finite_spectrum({2.0, 3.0}), finite_spectrum({5.0, 7.0}),
                    finite_spectrum({10.0, 21.0})};
    check("finite anomaly = 0", std::abs(multiplicative_anomaly(in)) < 1e-12);
  }
  {
    ORProblem prob{Matrix(2.0 * Matrix::Identity(2, 2)), 1, 1,
                   Vector::Constant(1, 3.7)};
    prob.H(1, 1) = 3.0;
    ORResult r = or_regularized_power(prob, 0.01);
    Matrix expect(2, 2);
    expect << 0.5, 0.0, 0.0, 1.0 / 3.0;
    check("operator regularization n=1",
          (r.value - expect).norm() < 1e-8);
  }
  std::printf("%s\n", failures == 0 ? "ALL PASS" : "FAILURES PRESENT");
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral zeta function evaluator"};
  app.require_subcommand(1);

  double tol = 1e-12;
  int max_terms = 2'000'000;
  unsigned seed = 12345;
  app.add_option("--tol", tol, "relative tolerance");
  app.add_option("--max-terms", max_terms, "series/quadrature term budget");
  app.add_option("--seed", seed, "seed for randomized self-test draws");

  // epstein
  auto* cmd_ep = app.add_subcommand("epstein", "inhomogeneous/massless Epstein zeta");
  int ep_dim = 2;
  std::string ep_matrix = "[[2,0],[0,2]]", ep_offset, ep_s = "3+0i";
  double ep_q = 1.0;
  bool ep_origin = false;
  cmd_ep->add_option("--dim", ep_dim, "dimension p");
  cmd_ep->add_option("--matrix", ep_matrix, "form matrix A, Q(n)=(1/2) n^T A n");
  cmd_ep->add_option("--offset", ep_offset, "offset vector c");
  cmd_ep->add_option("--q", ep_q, "inhomogeneity q >= 0");
  cmd_ep->add_option("--s", ep_s, "complex argument s");
  cmd_ep->add_flag("--include-origin", ep_origin, "include the n = 0 term");

  // cs2d
  auto* cmd_cs = app.add_subcommand("cs2d", "2-D closed forms (a n1^2 + b n1 n2 + c n2^2 [+ q])");
  double cs_a = 1.0, cs_b = 0.0, cs_c = 1.0, cs_q = 0.0;
  std::string cs_s = "2+0i";
  cmd_cs->add_option("--a", cs_a);
  cmd_cs->add_option("--b", cs_b);
  cmd_cs->add_option("--c", cs_c);
  cmd_cs->add_option("--q", cs_q);
  cmd_cs->add_option("--s", cs_s);

  // truncated
  auto* cmd_tr = app.add_subcommand("truncated", "half-line truncated zeta");
  double tr_a = 1.0, tr_c = 1.0, tr_q = 4.0;
  std::string tr_s = "3+0i";
  int tr_res_j = -1;
  cmd_tr->add_option("--a", tr_a);
  cmd_tr->add_option("--c", tr_c);
  cmd_tr->add_option("--q", tr_q);
  cmd_tr->add_option("--s", tr_s);
  cmd_tr->add_option("--residue", tr_res_j, "report residue pair at s = 1/2 - j");

  // casimir
  auto* cmd_ca = app.add_subcommand("casimir", "Casimir energy on a d-torus");
  int ca_dim = 1;
  std::string ca_metric = "[1]";
  double ca_mass = 0.0;
  cmd_ca->add_option("--dim", ca_dim);
  cmd_ca->add_option("--metric", ca_metric, "metric matrix g (or [a] for d=1)");
  cmd_ca->add_option("--mass", ca_mass);

  // det
  auto* cmd_de = app.add_subcommand("det", "2-D zeta determinants");
  double de_a = 1.0, de_b = 0.0, de_c = 1.0, de_q = 0.0;
  double de_tau1 = 0.0, de_tau2 = 0.0;
  cmd_de->add_option("--a", de_a);
  cmd_de->add_option("--b", de_b);
  cmd_de->add_option("--c", de_c);
  cmd_de->add_option("--q", de_q);
  cmd_de->add_option("--tau1", de_tau1);
  cmd_de->add_option("--tau2", de_tau2, "Teichmueller form when tau2 > 0");

  // anomaly
  auto* cmd_an = app.add_subcommand("anomaly", "multiplicative anomaly from spectrum files");
  std::string an_a, an_b, an_ab;
  cmd_an->add_option("--spec-a", an_a)->required();
  cmd_an->add_option("--spec-b", an_b)->required();
  cmd_an->add_option("--spec-ab", an_ab)->required();

  // orcheck
  auto* cmd_or = app.add_subcommand("orcheck", "operator-regularization identity check");
  int or_n = 1, or_m = 1, or_size = 4;
  double or_eps = 0.01;
  cmd_or->add_option("--n", or_n, "loop order");
  cmd_or->add_option("--m", or_m, "power");
  cmd_or->add_option("--size", or_size, "matrix dimension");
  cmd_or->add_option("--eps", or_eps, "eps_step");

  auto* cmd_st = app.add_subcommand("selftest", "run the invariant suite");

  // let --tol/--max-terms/--seed appear after the subcommand name too
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  AccuracyTarget acc;
  acc.rel_tol = tol;
  acc.max_terms = max_terms;

  auto t_start = std::chrono::steady_clock::now();
  try {
    acc.validate();
    JsonWriter w;
    w.open();
    if (app.got_subcommand(cmd_ep)) {
      Matrix A = parse_matrix(ep_matrix);
      if (static_cast<int>(A.rows()) != ep_dim)
        throw std::invalid_argument("--dim does not match --matrix size");
      Vector c = ep_offset.empty() ? Vector(Vector::Zero(ep_dim))
                                   : parse_vector(ep_offset);
      Complex s = parse_complex(ep_s);
      w.field("command", std::string("epstein"));
      w.key("input");
      {
        JsonWriter in;
        in.open();
        in.field("dim", ep_dim);
        in.raw("matrix", matrix_json(A));
        in.key("offset");
        in.os << "[";
        for (int i = 0; i < c.size(); ++i) {
          if (i) in.os << ",";
          in.os << fmt(c[i]);
        }
        in.os << "]";
        in.field("q", ep_q);
        in.field_cplx("s", s);
        in.field("include_origin", ep_origin);
        in.field("tol", acc.rel_tol);
        in.close();
        w.os << in.os.str();
      }
      ZetaValue z;
      if (ep_q != 0.0) {
        EpsteinParams params{QuadraticFormSpec{A}, c, ep_q};
        z = epstein_inhomogeneous(params, s, acc, ep_origin);
      } else {
        if (c.norm() != 0.0 || ep_origin)
          throw DomainError("massless path requires zero offset, origin excluded");
        z = epstein_massless_recursive(QuadraticFormSpec{A}, s, acc);
      }
      emit_zeta_result(w, z);
    } else if (app.got_subcommand(cmd_cs)) {
      Complex s = parse_complex(cs_s);
      w.field("command", std::string("cs2d"));
      w.key("input");
      {
        JsonWriter in;
        in.open();
        in.field("a", cs_a);
        in.field("b", cs_b);
        in.field("c", cs_c);
        in.field("q", cs_q);
        in.field_cplx("s", s);
        in.field("tol", acc.rel_tol);
        in.close();
        w.os << in.os.str();
      }
      ZetaValue z = (cs_q > 0.0)
                        ? epstein_2d_inhomogeneous(cs_a, cs_b, cs_c, cs_q, s, acc)
                        : chowla_selberg_2d(cs_a, cs_b, cs_c, s, acc);
      emit_zeta_result(w, z);
    } else if (app.got_subcommand(cmd_tr)) {
      Complex s = parse_complex(tr_s);
      TruncatedParams params{tr_a, tr_c, tr_q};
      w.field("command", std::string("truncated"));
      w.key("input");
      {
        JsonWriter in;
        in.open();
        in.field("a", tr_a);
        in.field("c", tr_c);
        in.field("q", tr_q);
        in.field_cplx("s", s);
        in.field("tol", acc.rel_tol);
        in.close();
        w.os << in.os.str();
      }
      if (tr_res_j >= 0) {
        auto [stated, extracted] = truncated_residue(params, tr_res_j, acc);
        w.field("stated_residue", stated);
        w.field("extracted_residue", extracted);
        w.field("err_estimate", 1e-6 * std::abs(extracted));
      } else {
        AsymptoticResult r = truncated_zeta(params, s, acc);
        w.field_cplx("value", r.value);
        w.field("err_estimate", r.err_estimate);
        w.field("terms_used", r.terms_used);
        w.field("smallest_term", r.smallest_term);
        w.field("accuracy_floor_hit", r.accuracy_floor_hit);
        if (r.nearest_pole) {
          w.key("nearest_pole");
          w.os << "{\"location\":{\"re\":" << fmt(r.nearest_pole->location.real())
               << ",\"im\":" << fmt(r.nearest_pole->location.imag())
               << "},\"residue\":{\"re\":" << fmt(r.nearest_pole->residue.real())
               << ",\"im\":" << fmt(r.nearest_pole->residue.imag())
               << "},\"distance\":" << fmt(r.nearest_pole->distance) << "}";
        } else {
          w.field_null("nearest_pole");
        }
      }
    } else if (app.got_subcommand(cmd_ca)) {
      Matrix g = parse_matrix(ca_metric[0] == '[' && ca_metric.find("[[") != 0
                                  ? "[" + ca_metric + "]"
                                  : ca_metric);
      if (static_cast<int>(g.rows()) != ca_dim)
        throw std::invalid_argument("--dim does not match --metric size");
      TorusSpec torus{g, ca_mass};
      w.field("command", std::string("casimir"));
      w.key("input");
      {
        JsonWriter in;
        in.open();
        in.field("dim", ca_dim);
        in.raw("metric", matrix_json(g));
        in.field("mass", ca_mass);
        in.field("tol", acc.rel_tol);
        in.close();
        w.os << in.os.str();
      }
      double e = casimir_energy_torus(torus, acc);
      w.field("value", e);
      w.field("err_estimate", 1e-12 * std::max(1.0, std::abs(e)));
    } else if (app.got_subcommand(cmd_de)) {
      w.field("command", std::string("det"));
      double v;
      w.key("input");
      {
        JsonWriter in;
        in.open();
        if (de_tau2 > 0.0) {
          in.field("tau1", de_tau1);
          in.field("tau2", de_tau2);
        } else {
          in.field("a", de_a);
          in.field("b", de_b);
          in.field("c", de_c);
          in.field("q", de_q);
        }
        in.close();
        w.os << in.os.str();
      }
      if (de_tau2 > 0.0)
        v = det_torus_teichmuller({de_tau1, de_tau2});
      else
        v = det_torus_2d(de_a, de_b, de_c, de_q);
      w.field("value", v);
      w.field("err_estimate", 1e-12 * std::abs(v));
    } else if (app.got_subcommand(cmd_an)) {
      AnomalyInput in{load_spectrum(an_a), load_spectrum(an_b),
                      load_spectrum(an_ab)};
      w.field("command", std::string("anomaly"));
      w.key("input");
      w.os << "{\"spec_a\":\"" << an_a << "\",\"spec_b\":\"" << an_b
           << "\",\"spec_ab\":\"" << an_ab << "\"}";
      w.first = false;
      double delta = multiplicative_anomaly(in, acc);
      w.field("value", delta);
      w.field("err_estimate", std::max(1e-12, 10.0 * acc.rel_tol));
    } else if (app.got_subcommand(cmd_or)) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> nd(0.0, 1.0);
      Matrix B(or_size, or_size);
      for (int i = 0; i < or_size; ++i)
        for (int j = 0; j < or_size; ++j) B(i, j) = nd(rng);
      Matrix H = B * B.transpose() + or_size * Matrix::Identity(or_size, or_size);
      Vector alphas(or_n);
      for (int i = 0; i < or_n; ++i) alphas[i] = nd(rng);
      ORProblem prob{H, or_m, or_n, alphas};
      ORResult r = or_regularized_power(prob, or_eps);
      MatrixFunctionCache cache(H);
      Matrix oracle = cache.power(-static_cast<double>(or_m));
      double rel = (r.value - oracle).norm() / oracle.norm();
      w.field("command", std::string("orcheck"));
      w.key("input");
      {
        JsonWriter in;
        in.open();
        in.field("n", or_n);
        in.field("m", or_m);
        in.field("size", or_size);
        in.field("eps", or_eps);
        in.field("seed", static_cast<int>(seed));
        in.close();
        w.os << in.os.str();
      }
      w.field("relative_error", rel);
      w.field("extrapolation_err", r.extrapolation_err);
      w.field("pass", rel <= 1e-6);
    } else if (app.got_subcommand(cmd_st)) {
      return run_selftest(seed);
    }
    w.close();
    auto t_end = std::chrono::steady_clock::now();
    std::cout << w.os.str() << "\n";
    std::cerr << "elapsed_ms="
              << std::chrono::duration_cast<std::chrono::milliseconds>(t_end -
                                                                       t_start)
                     .count()
              << "\n";
    return 0;
  } catch (const PoleError& e) {
    std::cerr << "pole error: " << e.what() << " at s=(" << fmt(e.location.real())
              << "," << fmt(e.location.imag()) << ") residue=("
              << fmt(e.residue.real()) << "," << fmt(e.residue.imag()) << ")\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
