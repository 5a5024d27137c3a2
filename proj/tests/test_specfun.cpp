#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracroot/power.hpp"
#include "fracroot/specfun.hpp"

using namespace fracroot;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Quasi-random points in |Re z| <= 10, |Im z| <= 10, kept 0.05 away from poles.
std::vector<Complex> strip_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Complex> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Complex z(u(rng), u(rng));
    bool near_pole = false;
    for (const Complex w : {z, z + 1.0}) {
      if (w.real() <= 0.5 && std::abs(w - std::round(w.real())) < 0.05) near_pole = true;
    }
    if (!near_pole) pts.push_back(z);
  }
  return pts;
}

}  // namespace

TEST(Gamma, KnownValues) {
  EXPECT_EQ(fracroot::gamma(Complex(1.0)), Complex(1.0));
  EXPECT_NEAR(fracroot::gamma(0.5), 1.7724538509055160273, 1e-15);
  // ∫₀^∞ t^{1.8} e^{−t} dt by high-precision quadrature
  EXPECT_LT(rel_err(fracroot::gamma(Complex(2.8)), 1.676490787764436858), 1e-14);
  EXPECT_EQ(fracroot::gamma(6.0), 120.0);
}

TEST(Gamma, ComplexOracleValues) {
  // independent 40-digit evaluations
  EXPECT_LT(rel_err(ln_gamma(Complex(-2.3, 1.7)), Complex(-4.0055477004522671, -6.9450267765961449)),
            1e-14);
  EXPECT_LT(rel_err(ln_gamma(Complex(-9.7, -9.9)), Complex(-39.426460610109571, 7.8062201564060039)),
            1e-14);
  EXPECT_LT(rel_err(ln_gamma(Complex(9.9, 9.9)), Complex(8.0553246501858902, 23.605707337931043)),
            1e-14);
  EXPECT_LT(rel_err(ln_gamma(Complex(-0.5, 0.001)), Complex(1.2655076560916038, -3.1415561634776819)),
            1e-14);
}

TEST(Gamma, PolesRaise) {
  EXPECT_THROW(fracroot::gamma(Complex(0.0)), PoleError);
  EXPECT_THROW(fracroot::gamma(Complex(-3.0)), PoleError);
  EXPECT_THROW(fracroot::gamma(Complex(-2.0 + 1e-13)), PoleError);
  EXPECT_THROW(ln_gamma(Complex(-1.0)), PoleError);
  EXPECT_NO_THROW(fracroot::gamma(Complex(-2.0 + 1e-9)));
}

TEST(Gamma, RecurrenceProperty) {
  for (const Complex z : strip_points(1000, 11)) {
    const Complex g1 = fracroot::gamma(z + 1.0);
    ASSERT_LE(std::abs(g1 - z * fracroot::gamma(z)) / std::abs(g1), 1e-11) << z;
  }
}

TEST(Gamma, ReflectionProperty) {
  for (const Complex z : strip_points(1000, 12)) {
    const Complex prod = fracroot::gamma(z) * fracroot::gamma(1.0 - z) * std::sin(std::numbers::pi * z) / std::numbers::pi;
    ASSERT_LE(std::abs(prod - 1.0), 1e-10) << z;
  }
}

TEST(Gamma, ConjugateSymmetry) {
  for (const Complex z : strip_points(300, 13)) {
    ASSERT_LE(rel_err(fracroot::gamma(std::conj(z)), std::conj(fracroot::gamma(z))), 1e-14) << z;
  }
}

TEST(LnGamma, KnownValues) {
  EXPECT_EQ(ln_gamma(Complex(1.0)), Complex(0.0));
  EXPECT_LT(rel_err(ln_gamma(Complex(10.0)), std::log(362880.0)), 1e-15);
}

TEST(LnGamma, MatchesDescendingRecursion) {
  // lnΓ(50.3) = lnΓ(0.3) + Σ_{k=0}^{49} ln(0.3 + k)
  double acc = ln_gamma(Complex(0.3)).real();
  for (int k = 0; k < 50; ++k) acc += std::log(0.3 + k);
  EXPECT_LT(std::abs(ln_gamma(Complex(50.3)).real() - acc) / acc, 1e-14);
}

TEST(LnGamma, ExponentiatesToGamma) {
  for (const Complex z : strip_points(300, 14)) {
    ASSERT_LE(rel_err(std::exp(ln_gamma(z)), fracroot::gamma(z)), 1e-10) << z;
  }
}

TEST(LnGamma, BranchIsContinuousAlongRays) {
  // the imaginary part must not jump by 2π between nearby points
  Complex prev = ln_gamma(Complex(-6.5, 0.5));
  for (double re = -6.45; re < 3.0; re += 0.05) {
    const Complex cur = ln_gamma(Complex(re, 0.5));
    ASSERT_LT(std::abs(cur.imag() - prev.imag()), 1.0) << re;
    prev = cur;
  }
}

TEST(BinomGeneral, Examples) {
  EXPECT_DOUBLE_EQ(binom_general(3, 2), 3.0);
  EXPECT_DOUBLE_EQ(binom_general(0.37, 0), 1.0);
  EXPECT_DOUBLE_EQ(binom_general(0.5, 2), -0.125);
  EXPECT_DOUBLE_EQ(binom_general(2, 3), 0.0);
}

TEST(BinomGeneral, PascalProperty) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = u(rng);
    for (unsigned k = 1; k <= 10; ++k) {
      const double lhs = binom_general(r, k);
      const double rhs = binom_general(r - 1.0, k) + binom_general(r - 1.0, k - 1);
      ASSERT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(lhs), 1e-300)) << r << " " << k;
    }
  }
}

TEST(MittagLeffler, ReducesToExp) {
  EXPECT_LT(rel_err(mittag_leffler({1, 1}, Complex(1, 2)), std::exp(Complex(1, 2))), 1e-14);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> r(0.0, 30.0), t(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 500; ++i) {
    const Complex z = std::polar(r(rng), t(rng));
    ASSERT_LE(rel_err(mittag_leffler({1, 1}, z), std::exp(z)), 1e-10) << z;
  }
}

TEST(MittagLeffler, SecondOrderGivesCosh) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> r(0.0, 10.0), t(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 500; ++i) {
    const Complex z = std::polar(r(rng), t(rng));
    ASSERT_LE(rel_err(mittag_leffler({2, 1}, z * z), std::cosh(z)), 1e-10) << z;
  }
}

TEST(MittagLeffler, AtZero) {
  EXPECT_DOUBLE_EQ(mittag_leffler({1, 2.5}, 0.0).real(), 1.0 / fracroot::gamma(2.5));
  EXPECT_DOUBLE_EQ(mittag_leffler({0.7, 1.3}, 0.0).real(), 1.0 / fracroot::gamma(1.3));
}

TEST(MittagLeffler, OracleValues) {
  // 2000-term extended-precision series
  EXPECT_LT(rel_err(mittag_leffler({1, 1.5}, 2.5), 7.509587506217249940), 1e-14);
  EXPECT_LT(rel_err(mittag_leffler({1, 0.3}, Complex(0, 30)),
                    Complex(10.27771743896352, -3.3721783527994069)),
            1e-12);
  EXPECT_LT(rel_err(mittag_leffler({1, 1.7}, Complex(0, 30)),
                    Complex(-0.075188144438187296, -0.028520428352682142)),
            1e-12);
  EXPECT_LT(rel_err(mittag_leffler({1, 1.000001}, Complex(0, 30)),
                    Complex(0.154249372153630511758, -0.988028472643336451812)),
            1e-12);
}

TEST(MittagLeffler, LargeArgumentOracleValues) {
  // 40-digit confluent hypergeometric evaluations, E_{1,b}(z) = 1F1(1; b; z)/Γ(b)
  EXPECT_LT(rel_err(mittag_leffler({1, 0.35}, Complex(0, 690)),
                    Complex(69.439668922079042977, -9.0339649375509651366)),
            1e-12);
  EXPECT_LT(rel_err(mittag_leffler({1, -0.7}, Complex(-400, 400)),
                    Complex(0.00049721501282403763829, 0.00050060254839543413546)),
            1e-12);
  EXPECT_LT(rel_err(mittag_leffler({1, 1.5}, Complex(-30, 5)),
                    Complex(0.018600841497825690996, 0.0031566179128434446442)),
            1e-12);
  EXPECT_LT(rel_err(mittag_leffler({1, 0.05}, Complex(-23.7, 30.9)),
                    Complex(-0.0007414652678981703982, -0.001056297514881798679)),
            1e-12);
}

TEST(MittagLeffler, Errors) {
  EXPECT_THROW(mittag_leffler({1, 1}, Complex(kMittagLefflerZMax + 1.0, 0)), DomainError);
  EXPECT_THROW(mittag_leffler({0, 1}, 1.0), DomainError);
  EXPECT_THROW(mittag_leffler({2.5, 1}, 1.0), DomainError);
  EXPECT_THROW(mittag_leffler({0.1, 1}, Complex(100, 0)), ConvergenceBudgetExceeded);
}

TEST(PrincipalPower, Examples) {
  EXPECT_NEAR(std::abs(principal_power(4.0, 0.5) - 2.0), 0.0, 1e-15);
  EXPECT_LT(std::abs(principal_power(-1.0, 0.5) - Complex(0, 1)), 1e-15);
  // polar form: (√2)^{4/3}·e^{iπ/3}
  const Complex expected = std::pow(std::sqrt(2.0), 4.0 / 3.0) *
                           Complex(std::cos(std::numbers::pi / 3.0), std::sin(std::numbers::pi / 3.0));
  EXPECT_LT(rel_err(principal_power(Complex(1, 1), 1.0 / 0.75), expected), 1e-15);
  EXPECT_LT(rel_err(principal_power(Complex(1, 1), 4.0 / 3.0),
                    Complex(0.7937005259840997374, 1.374729636998602626)),
            1e-15);
  EXPECT_EQ(principal_power(0.0, 0.3), Complex(0.0));
  EXPECT_THROW(principal_power(0.0, -0.3), DomainError);
  EXPECT_THROW(principal_power(0.0, 0.0), DomainError);
  EXPECT_EQ(principal_power(Complex(-2.5, 0.75), 1.0), Complex(-2.5, 0.75));
}

TEST(PrincipalPower, NegativeRealAxisUsesPlusPi) {
  const Complex v = principal_power(Complex(-4.0, -0.0), 0.5);
  EXPECT_LT(std::abs(v - Complex(0, 2)), 1e-15);
}
