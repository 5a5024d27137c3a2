#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracroot/builtins.hpp"
#include "fracroot/funcmodel.hpp"
#include "fracroot/json_io.hpp"

using namespace fracroot;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

const DerivativeKind kKinds[] = {DerivativeKind::Caputo, DerivativeKind::RiemannLiouville};

}  // namespace

TEST(FunctionModel, MergesEqualExponents) {
  const FunctionModel f({{1.0, 2}, {2.0, 1}, {3.0, 2}}, {});
  ASSERT_EQ(f.power_terms().size(), 2u);
  EXPECT_EQ(f.power_terms()[0].coeff, Complex(4.0));
  EXPECT_EQ(f.power_terms()[0].exponent, 2.0);
}

TEST(FunctionModel, RejectsInvalidTerms) {
  EXPECT_THROW(FunctionModel({}, {}), DomainError);
  EXPECT_THROW(FunctionModel({{1.0, -0.5}}, {}), DomainError);
  EXPECT_THROW(FunctionModel({{1.0, INFINITY}}, {}), DomainError);
  EXPECT_THROW(FunctionModel({}, {{1.0, Complex(NAN, 0)}}), DomainError);
}

TEST(Eval, ListedRoots) {
  EXPECT_LT(std::abs(builtin("f1").model(-0.584)), 1e-4);
  EXPECT_EQ(builtin("f3").model(0.0), Complex(0.0));
  EXPECT_LT(std::abs(builtin("f2").model(Complex(2.90807, -4.24908))), 1e-3);
}

TEST(Eval, ListedRootsAreNearTrueRoots) {
  for (const auto& name : builtin_names()) {
    const auto b = builtin(name);
    for (const Complex r : b.roots) {
      // a Newton step from the listed root moves less than 1e-4
      const Complex step = b.model(r) / classical_derivative(b.model, r);
      EXPECT_LT(std::abs(step), 1e-4) << name << " " << r;
    }
  }
}

TEST(Eval, F4MatchesSine) {
  const auto f = builtin("f4").model;
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    const double expected = std::sin(10 * x) - 0.5 * x + 0.2;
    EXPECT_NEAR(f(x).real(), expected, 1e-14);
    EXPECT_NEAR(f(x).imag(), 0.0, 1e-15);
  }
}

TEST(ClassicalDerivative, Examples) {
  EXPECT_EQ(classical_derivative(builtin("f3").model, 0.0), Complex(1.0));
  EXPECT_EQ(classical_derivative(FunctionModel({{1.0, 2}}, {}), 3.0), Complex(6.0));
}

TEST(ClassicalDerivative, F2FiniteDifference) {
  const auto f = builtin("f2").model;
  const Complex x(1, 1);
  const double h = 1e-6;
  const Complex fd = (f(x + h) - f(x - h)) / (2 * h);
  EXPECT_LT(rel_err(classical_derivative(f, x), fd), 1e-6);
}

TEST(ClassicalDerivative, SingularAtReference) {
  EXPECT_THROW(classical_derivative(builtin("f2").model, 0.0), SingularityError);
}

TEST(FracDerivative, CaputoAnnihilatesConstants) {
  const FunctionModel c({{5.0, 0}}, {});
  for (double alpha : {0.2, 0.5, 0.9})
    EXPECT_EQ(frac_derivative(c, {DerivativeKind::Caputo, alpha, 0.0}, 2.7), Complex(0.0));
}

TEST(FracDerivative, RiemannLiouvilleOfConstant) {
  const FunctionModel c({{5.0, 0}}, {});
  for (double alpha : {0.2, 0.5, 0.9}) {
    for (double x : {0.3, 2.0}) {
      const Complex v = frac_derivative(c, {DerivativeKind::RiemannLiouville, alpha, 0.0}, x);
      EXPECT_LT(rel_err(v, 5.0 * std::pow(x, -alpha) / std::tgamma(1.0 - alpha)), 1e-14);
    }
  }
  const FunctionModel one({{1.0, 0}}, {});
  EXPECT_LT(rel_err(frac_derivative(one, {DerivativeKind::RiemannLiouville, 0.5, 0.0}, 4.0),
                    0.282094791773878143),
            1e-15);
}

TEST(FracDerivative, CaputoOfIdentity) {
  const FunctionModel x({{1.0, 1}}, {});
  EXPECT_LT(rel_err(frac_derivative(x, {DerivativeKind::Caputo, 0.5, 0.0}, 4.0), 2.256758334191025148),
            1e-15);
}

TEST(FracDerivative, AlphaOneIsClassicalExactly) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name).model;
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      for (auto kind : kKinds) {
        ASSERT_EQ(frac_derivative(f, {kind, 1.0, 0.0}, x), classical_derivative(f, x)) << name;
      }
    }
  }
}

TEST(FracDerivative, NearOneLimitMatchesQuadrature) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  const double alpha = 1.0 - 1e-6;
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name).model;
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      const Complex cl = classical_derivative(f, x);
      const Complex q = frac_derivative_quadrature(f, {DerivativeKind::Caputo, alpha, 0.0}, x);
      ASSERT_LE(std::abs(q - cl), 1e-4 * std::abs(cl)) << name << " x=" << x;
    }
  }
  const auto f3 = builtin("f3").model;
  const Complex q = frac_derivative_quadrature(f3, {DerivativeKind::Caputo, alpha, 0.0}, 0.2);
  EXPECT_LT(rel_err(q, classical_derivative(f3, 0.2)), 1e-4);
}

TEST(FracDerivative, OracleEquivalence) {
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name).model;
    for (auto kind : kKinds) {
      for (double alpha : {0.25, 0.5, 0.75, 0.95}) {
        for (int i = 1; i <= 10; ++i) {
          const double x = 0.3 * i;
          const FracSpec spec{kind, alpha, 0.0};
          const Complex cf = frac_derivative(f, spec, x);
          const Complex q = frac_derivative_quadrature(f, spec, x);
          ASSERT_LE(std::abs(cf - q), 1e-6 * (1.0 + std::abs(cf)))
              << name << " " << to_string(kind) << " alpha=" << alpha << " x=" << x;
        }
      }
    }
  }
}

TEST(FracDerivative, RiemannLiouvilleF3AgainstQuadrature) {
  const auto f3 = builtin("f3").model;
  const FracSpec spec{DerivativeKind::RiemannLiouville, 0.9, 0.0};
  EXPECT_LT(std::abs(frac_derivative(f3, spec, 0.2) - frac_derivative_quadrature(f3, spec, 0.2)), 1e-6);
}

TEST(FracDerivative, NonZeroBase) {
  const FunctionModel f = recenter_powers(builtin("f1").model, -1.0);
  for (auto kind : kKinds) {
    const FracSpec spec{kind, 0.6, -1.0};
    for (double x : {-0.5, 0.4, 1.5}) {
      const Complex cf = frac_derivative(f, spec, x);
      ASSERT_LE(std::abs(cf - frac_derivative_quadrature(f, spec, x)), 1e-6 * (1.0 + std::abs(cf)));
    }
  }
}

TEST(FracDerivative, Linearity) {
  const auto f = builtin("f1").model;
  const auto g = builtin("f4").model;
  const Complex c1(0.7, -1.2), c2(-2.5, 0.3);
  std::vector<PowerTerm> p;
  std::vector<ExpTerm> e;
  for (auto t : f.power_terms()) p.push_back({c1 * t.coeff, t.exponent});
  for (auto t : g.power_terms()) p.push_back({c2 * t.coeff, t.exponent});
  for (auto t : g.exp_terms()) e.push_back({c2 * t.coeff, t.rate});
  const FunctionModel h(p, e);
  for (auto kind : kKinds) {
    for (double alpha : {0.3, 0.8}) {
      const FracSpec spec{kind, alpha, 0.0};
      for (Complex x : {Complex(0.5, 0.2), Complex(-1.1, 0.7), Complex(2.0, -0.4)}) {
        const Complex lhs = frac_derivative(h, spec, x);
        const Complex rhs = c1 * frac_derivative(f, spec, x) + c2 * frac_derivative(g, spec, x);
        ASSERT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
      }
    }
  }
}

TEST(FracDerivative, Errors) {
  const auto f1 = builtin("f1").model;
  EXPECT_THROW(frac_derivative(f1, {DerivativeKind::Caputo, 0.5, 1.0}, 2.0), BaseMismatchError);
  const FunctionModel shifted({{1.0, 0}}, {{1.0, 1.0}}, 1.0);
  EXPECT_THROW(frac_derivative(shifted, {DerivativeKind::Caputo, 0.5, 1.0}, 2.0), ExpBaseError);
  EXPECT_THROW(frac_derivative(f1, {DerivativeKind::RiemannLiouville, 0.5, 0.0}, 0.0), SingularityError);
  EXPECT_THROW(frac_derivative(f1, {DerivativeKind::Caputo, 0.0, 0.0}, 1.0), DomainError);
  EXPECT_THROW(frac_derivative(f1, {DerivativeKind::Caputo, 1.5, 0.0}, 1.0), DomainError);
  // Caputo of f1 at the base is finite: the constant term is annihilated
  EXPECT_NO_THROW(frac_derivative(f1, {DerivativeKind::Caputo, 0.5, 0.0}, 0.0));
}

TEST(FracDerivative, HigherOrderPowerRule) {
  // D^{1.6} of x^3, both kinds: 6/Γ(2.4)·x^{1.4}
  const FunctionModel f({{1.0, 3}}, {});
  for (auto kind : kKinds) {
    const Complex v = frac_derivative_of_order(f, kind, 1.6, 0.0, 2.0);
    EXPECT_LT(rel_err(v, 6.0 / std::tgamma(2.4) * std::pow(2.0, 1.4)), 1e-14);
  }
  // Caputo drops x below the order, R-L keeps x^1 with 1/Γ(0.4)
  const FunctionModel g({{1.0, 1}}, {});
  EXPECT_EQ(frac_derivative_of_order(g, DerivativeKind::Caputo, 1.6, 0.0, 2.0), Complex(0.0));
  EXPECT_LT(rel_err(frac_derivative_of_order(g, DerivativeKind::RiemannLiouville, 1.6, 0.0, 2.0),
                    std::pow(2.0, -0.6) / std::tgamma(0.4)),
            1e-14);
  // D^{1.6} of e^x (Caputo) = x^{0.4} E_{1,1.4}(x)
  const auto f3 = builtin("f3").model;
  EXPECT_LT(rel_err(frac_derivative_of_order(f3, DerivativeKind::Caputo, 1.6, 0.0, 0.8),
                    std::pow(0.8, 0.4) * mittag_leffler({1, 1.4}, 0.8)),
            1e-14);
}

TEST(Quadrature, RejectsPointsBelowBase) {
  EXPECT_THROW(frac_derivative_quadrature(builtin("f1").model, {DerivativeKind::Caputo, 0.5, 0.0}, 0.0),
               DomainError);
}

TEST(RecenterPowers, Square) {
  const auto g = recenter_powers(FunctionModel({{1.0, 2}}, {}), 1.0);
  EXPECT_EQ(g.reference_point(), 1.0);
  ASSERT_EQ(g.power_terms().size(), 3u);
  EXPECT_EQ(g.power_terms()[0].coeff, Complex(1.0));  // (x−1)²
  EXPECT_EQ(g.power_terms()[1].coeff, Complex(2.0));  // 2(x−1)
  EXPECT_EQ(g.power_terms()[2].coeff, Complex(1.0));  // 1
}

TEST(RecenterPowers, F1EvaluationEquivalence) {
  const auto f1 = builtin("f1").model;
  const auto g = recenter_powers(f1, -1.0);
  EXPECT_LT(std::abs(g(-0.584) - f1(-0.584)), 1e-10);
  EXPECT_LT(rel_err(g(Complex(0.3, 1.1)), f1(Complex(0.3, 1.1))), 1e-12);
}

TEST(RecenterPowers, Errors) {
  EXPECT_THROW(recenter_powers(builtin("f2").model, 1.0), NonIntegerExponentError);
  EXPECT_THROW(recenter_powers(builtin("f3").model, 1.0), ExpBaseError);
  EXPECT_NO_THROW(recenter_powers(builtin("f3").model, 0.0));
}

TEST(Json, RoundTrip) {
  for (const auto& name : builtin_names()) {
    const auto f = builtin(name).model;
    const auto g = function_from_json(nlohmann::json::parse(function_to_json(f).dump()));
    for (Complex x : {Complex(0.4, 0.1), Complex(-1.2, 0.8)}) ASSERT_EQ(f(x), g(x));
  }
}

TEST(Json, FixtureFilesMatchBuiltins) {
  const char* dir = std::getenv("FRACROOT_FUNCTIONS");
  if (!dir) GTEST_SKIP() << "FRACROOT_FUNCTIONS not set";
  for (const auto& name : builtin_names()) {
    const auto g = function_from_json(read_json_file(std::string(dir) + "/" + name + ".json"));
    const auto f = builtin(name).model;
    for (Complex x : {Complex(0.4, 0.1), Complex(-1.2, 0.8), Complex(2.5, 0)}) {
      ASSERT_EQ(f(x), g(x)) << name;
    }
  }
}

TEST(Json, MalformedInputIsConfigError) {
  EXPECT_THROW(function_from_json(nlohmann::json::parse(R"({"power_terms": [{"re": 1}]})")), ConfigError);
  EXPECT_THROW(function_from_json(nlohmann::json::parse(R"({})")), ConfigError);
  EXPECT_THROW(function_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
}
