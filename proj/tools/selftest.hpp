#pragma once

// Built-in self-test run by `fracroot selftest`.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "fracroot/fracroot.hpp"

namespace fracroot::cli {

struct SelftestOptions {
  bool sabotage_gamma = false;  // perturbs Γ inside the checks (fault injection)
};

struct SelftestReport {
  int passed = 0;
  int failed = 0;
};

inline SelftestReport run_selftest(const SelftestOptions& opts, std::ostream& out) {
  SelftestReport report;
  auto check = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << "\n";
    }
    out << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    (ok ? report.passed : report.failed)++;
  };
  auto G = [&](Complex z) {
    const Complex v = gamma(z);
    return opts.sabotage_gamma ? v * (1.0 + 1e-6) : v;
  };
  auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

  // special functions
  check("gamma(1) = 1", [&] { return rel(G(1.0), 1.0) < 1e-14; });
  check("gamma(0.5) = sqrt(pi)", [&] { return rel(G(0.5), std::sqrt(std::numbers::pi)) < 1e-14; });
  check("gamma(2.8) quadrature oracle", [&] { return rel(G(2.8), 1.676490787764436858) < 1e-13; });
  for (Complex z : {Complex(0.3, 0.7), Complex(-2.6, 1.1), Complex(4.2, -5.5), Complex(-7.3, -0.4)}) {
    check("gamma recurrence at " + std::to_string(z.real()) + "," + std::to_string(z.imag()),
          [&] { return rel(G(z + 1.0), z * G(z)) < 1e-11; });
    check("gamma reflection at " + std::to_string(z.real()) + "," + std::to_string(z.imag()), [&] {
      const Complex prod = G(z) * G(1.0 - z) * std::sin(std::numbers::pi * z) / std::numbers::pi;
      return std::abs(prod - 1.0) < 1e-10;
    });
  }
  check("gamma conjugate symmetry",
        [&] { return rel(G(Complex(1.3, -2.2)), std::conj(G(Complex(1.3, 2.2)))) < 1e-14; });
  check("ln_gamma(10) = ln 9!", [&] { return rel(ln_gamma(Complex(10.0)), std::log(362880.0)) < 1e-14; });
  check("binom_general(0.5, 2) = -0.125", [] { return binom_general(0.5, 2) == -0.125; });
  for (Complex z : {Complex(1, 2), Complex(-30, 0), Complex(0, 30), Complex(20, -20)}) {
    check("E_{1,1}(z) = exp(z) at " + std::to_string(z.real()) + "," + std::to_string(z.imag()),
          [&] { return rel(mittag_leffler({1, 1}, z), std::exp(z)) < 1e-10; });
  }
  for (Complex z : {Complex(3, 1), Complex(0, 9), Complex(-10, 0)}) {
    check("E_{2,1}(z^2) = cosh(z) at " + std::to_string(z.real()) + "," + std::to_string(z.imag()),
          [&] { return rel(mittag_leffler({2, 1}, z * z), std::cosh(z)) < 1e-10; });
  }
  check("E_{1,1.5}(2.5) series oracle",
        [&] { return rel(mittag_leffler({1, 1.5}, 2.5), 7.509587506217249940) < 1e-12; });

  // closed forms against quadrature
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name).model;
    for (auto kind : {DerivativeKind::Caputo, DerivativeKind::RiemannLiouville}) {
      for (double alpha : {0.25, 0.75}) {
        check("oracle " + name + " " + to_string(kind) + " alpha=" + std::to_string(alpha), [&] {
          const FracSpec spec{kind, alpha, 0.0};
          for (double x : {0.4, 1.3, 2.9}) {
            const Complex cf = frac_derivative(f, spec, x);
            const Complex q = frac_derivative_quadrature(f, spec, x);
            if (std::abs(cf - q) > 1e-6 * (1.0 + std::abs(cf))) return false;
          }
          return true;
        });
      }
    }
  }
  check("caputo alpha=0.5 of x at 4", [&] {
    const FunctionModel f({{1.0, 1}}, {});
    const Complex v = frac_derivative(f, {DerivativeKind::Caputo, 0.5, 0.0}, 4.0);
    return rel(v, std::sqrt(4.0) / G(1.5)) < 1e-13;
  });

  // alpha = 1 regression rows
  struct Row {
    const char* fn;
    MethodKind method;
    Complex x0;
    int iterations;
  };
  for (const Row& r : {Row{"f1", MethodKind::CFN1, -1.5, 6}, Row{"f1", MethodKind::CFN2, -1.5, 6},
                       Row{"f1", MethodKind::CFT, -1.5, 5}, Row{"f2", MethodKind::CFN1, -4.5, 4},
                       Row{"f2", MethodKind::RLFT, -4.5, 3}, Row{"f3", MethodKind::CFN2, 0.2, 4},
                       Row{"f3", MethodKind::CFT, 0.2, 3}}) {
    check(std::string("alpha=1 ") + r.fn + " " + std::string(method_name(r.method)) + " iterations", [&] {
      SolverConfig cfg;
      const auto t = solve(r.method, builtin(r.fn).model, r.x0, cfg);
      return is_converged(t.status) && t.iterations == r.iterations && t.final_residual() < 1e-8;
    });
  }
  check("alpha=1 methods coincide on f4", [&] {
    SolverConfig cfg;
    cfg.max_iter = 40;
    const auto f = builtin("f4").model;
    const auto a = solve(MethodKind::CFN1, f, 0.7, cfg);
    const auto b = solve(MethodKind::RLFN2, f, 0.7, cfg);
    return a.iterates == b.iterates;
  });
  check("solve from a root takes 0 iterations", [&] {
    SolverConfig cfg;
    cfg.alpha = 0.5;
    const auto t = solve(MethodKind::CFN2, builtin("f3").model, 0.0, cfg);
    return t.iterations == 0 && t.status == TraceStatus::ConvergedResidual;
  });
  check("error constants reduce to C2 at alpha=1", [&] {
    const auto f = builtin("f1").model;
    const Complex root = polish_root(f, -0.584);
    const auto ec = error_constants(f, root, 1.0, DerivativeKind::Caputo);
    const Complex c2 = classical_derivative(f, root, 2) / (2.0 * classical_derivative(f, root));
    return rel(ec.newton_constant, c2) < 1e-10;
  });

  out << report.passed << "/" << (report.passed + report.failed) << " checks passed\n";
  return report;
}

}  // namespace fracroot::cli
