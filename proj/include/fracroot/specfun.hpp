#pragma once

// Complex special functions: Gamma, log-Gamma, generalized binomial
// coefficients and the two-parameter Mittag-Leffler function.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fracroot/errors.hpp"

namespace fracroot {

using Complex = std::complex<double>;

/// Distance to a nonpositive integer below which Gamma reports a pole.
inline constexpr double kPoleTolerance = 1e-12;

/// Largest |z| accepted by mittag_leffler.
inline constexpr double kMittagLefflerZMax = 700.0;

/// Hard cap on the number of series terms summed by mittag_leffler.
inline constexpr std::size_t kMittagLefflerMaxTerms = 10000;

/// Parameters (a, b) of E_{a,b}.
struct MLParams {
  double a = 1.0;
  double b = 1.0;
};

namespace detail {

// Lanczos approximation, g = 607/128, 15 coefficients.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr std::array<double, 15> kLanczosCoeffs = {
    0.99999999999999709182,    57.156235665862923517,
    -59.597960355475491248,    14.136097974741747174,
    -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4,
    0.15808870322491248884e-3, -0.21026444172410488319e-3,
    0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

inline constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;
inline constexpr double kLnPi = 1.1447298858494001741434273513531;

template <typename T>
T lanczos_series(T z) {
  T ser = kLanczosCoeffs[0];
  for (std::size_t j = 1; j < kLanczosCoeffs.size(); ++j) {
    ser += kLanczosCoeffs[j] / (z + static_cast<double>(j));
  }
  return ser;
}

/// Exact n! for 0 <= n <= 170, stored as double.
inline double factorial(unsigned n) {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  if (n >= table.size()) return std::numeric_limits<double>::infinity();
  return table[n];
}

inline bool near_nonpositive_integer(Complex z) {
  if (z.real() > 0.5) return false;
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z - Complex(n, 0.0)) < kPoleTolerance;
}

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::floor(x) == x;
}

/// sin(pi z) with exact reduction of the real part.
inline Complex sinpi(Complex z) {
  double r = z.real() - 2.0 * std::round(0.5 * z.real());  // r in [-1, 1]
  double y = z.imag();
  if (r > 0.5) {
    r = 1.0 - r;
    y = -y;
  } else if (r < -0.5) {
    r = -1.0 - r;
    y = -y;
  }
  return std::sin(Complex(std::numbers::pi * r, std::numbers::pi * y));
}

inline double sinpi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

/// Principal log of sin(pi z), safe for large |Im z|.
inline Complex log_sinpi(Complex z) {
  if (std::abs(z.imag()) < 200.0) return std::log(sinpi(z));
  // sin(pi z) = -(e^{-i pi z} / 2i)(1 - e^{2 i pi z}) for Im z > 0, mirrored below.
  const double y = std::abs(z.imag());
  const double x = z.imag() > 0 ? z.real() : -z.real();
  const Complex small = std::exp(Complex(-2.0 * std::numbers::pi * y, 2.0 * std::numbers::pi * x));
  const Complex tail = std::log(1.0 - small);
  double re = std::numbers::pi * y - std::numbers::ln2 + tail.real();
  double im = -std::numbers::pi * x + 0.5 * std::numbers::pi + tail.imag();
  im = std::remainder(im, 2.0 * std::numbers::pi);
  if (im <= -std::numbers::pi) im += 2.0 * std::numbers::pi;
  Complex out(re, im);
  return z.imag() > 0 ? out : std::conj(out);
}

}  // namespace detail

/// Γ(x) for real x. Positive integers up to 171 are returned exactly.
inline double gamma(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.5 && std::abs(x - std::round(x)) < kPoleTolerance && std::round(x) <= 0.0) {
    throw PoleError("gamma: pole at nonpositive integer " + std::to_string(std::round(x)));
  }
  if (x >= 1.0 && x <= 171.0 && std::floor(x) == x) {
    return detail::factorial(static_cast<unsigned>(x) - 1);
  }
  if (x < 0.5) {
    return std::numbers::pi / (detail::sinpi(x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  const double ser = detail::lanczos_series(z);
  return std::exp((z + 0.5) * std::log(t) - t) * std::sqrt(2.0 * std::numbers::pi) * ser;
}

/// Γ(z) for complex z (Lanczos, reflection for Re z < 0.5).
inline Complex gamma(Complex z) {
  if (detail::near_nonpositive_integer(z)) {
    throw PoleError("gamma: pole near nonpositive integer");
  }
  if (z.imag() == 0.0) return Complex(gamma(z.real()), 0.0);
  if (z.real() < 0.5) {
    return std::numbers::pi / (detail::sinpi(z) * gamma(1.0 - z));
  }
  const Complex w = z - 1.0;
  const Complex t = w + detail::kLanczosG + 0.5;
  const Complex ser = detail::lanczos_series(w);
  return std::exp((w + 0.5) * std::log(t) - t) * std::sqrt(2.0 * std::numbers::pi) * ser;
}

/// ln|Γ(x)| for real x.
inline double ln_abs_gamma(double x) {
  if (x <= 0.5 && std::abs(x - std::round(x)) < kPoleTolerance && std::round(x) <= 0.0) {
    throw PoleError("ln_gamma: pole at nonpositive integer");
  }
  if (x < 0.5) {
    return detail::kLnPi - std::log(std::abs(detail::sinpi(x))) - ln_abs_gamma(1.0 - x);
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  const double t = x + detail::kLanczosG + 0.5;
  const double ser = detail::lanczos_series(x);
  return (x + 0.5) * std::log(t) - t + detail::kLnSqrt2Pi + std::log(ser / x);
}

/// Sign of Γ(x) for real non-pole x.
inline double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  return (static_cast<long long>(std::floor(-x)) % 2 == 0) ? -1.0 : 1.0;
}

/// 1/Γ(x) for real x; zero at the poles of Γ.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  if (x > 170.0) return gamma_sign(x) * std::exp(-ln_abs_gamma(x));
  return 1.0 / gamma(x);
}

/// Principal-branch log-Gamma: analytic off the negative real axis and
/// continuous along rays from +infinity.
inline Complex ln_gamma(Complex z) {
  if (detail::near_nonpositive_integer(z)) {
    throw PoleError("ln_gamma: pole near nonpositive integer");
  }
  if (z.real() >= 0.5) {
    const Complex t = z + detail::kLanczosG + 0.5;
    const Complex ser = detail::lanczos_series(z);
    return (z + 0.5) * std::log(t) - t + detail::kLnSqrt2Pi + std::log(ser) - std::log(z);
  }
  // Reflection with a 2πi·k correction restoring the principal branch.
  const double branch =
      std::copysign(2.0 * std::numbers::pi, z.imag()) * std::floor(0.5 * z.real() + 0.25);
  return Complex(detail::kLnPi, branch) - detail::log_sinpi(z) - ln_gamma(1.0 - z);
}

/// Generalized binomial coefficient Γ(r+1) / (k! Γ(r-k+1)), evaluated as
/// the falling factorial r(r-1)...(r-k+1)/k!. Where Γ(r-k+1) has a pole
/// the product is exactly zero.
inline double binom_general(double r, unsigned k) {
  double acc = 1.0;
  for (unsigned i = 0; i < k; ++i) {
    acc *= (r - static_cast<double>(i)) / static_cast<double>(i + 1);
  }
  return acc;
}

namespace detail {

struct SeriesResult {
  Complex sum;
  double abs_sum = 0.0;  // Σ|term|, for the cancellation estimate
};

/// Σ_{k>=0} z^k / Γ(ak+b) by direct summation.
inline SeriesResult ml_taylor(double a, double b, Complex z) {
  const double log_abs_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);
  const double threshold = std::pow(std::abs(z), 1.0 / a) + 1.0;
  SeriesResult out{};
  Complex term{};
  bool recurrence_ready = false;
  for (std::size_t k = 0; k < kMittagLefflerMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double arg = a * kd + b;
    if (is_nonpositive_integer(arg)) {
      recurrence_ready = false;
      continue;
    }
    if (a == 1.0 && recurrence_ready) {
      term *= z / (arg - 1.0);
    } else if (arg > 0.0 && arg < 20.0) {
      term = std::pow(z, static_cast<int>(k)) * rgamma(arg);
      recurrence_ready = true;
    } else {
      // log-domain evaluation keeps large z^k / Γ(ak+b) representable
      const double mag = kd * log_abs_z - ln_abs_gamma(arg);
      term = gamma_sign(arg) * std::polar(std::exp(mag), kd * arg_z);
      recurrence_ready = true;
    }
    out.sum += term;
    const double t = std::abs(term);
    out.abs_sum += t;
    if (arg > threshold && t <= 1e-16 * (1.0 + std::abs(out.sum))) return out;
  }
  throw ConvergenceBudgetExceeded("mittag_leffler: term cap reached before the tail bound");
}

/// Σ_k (b-1)/(b-1+k) w^k / k!, the Kummer-transformed series: for a = 1,
/// E_{1,b}(z) = e^z / Γ(b) · this(−z).
inline SeriesResult ml_kummer(double b, Complex w) {
  SeriesResult out{};
  Complex pw = 1.0;  // w^k / k!
  const double threshold = std::abs(w) + 1.0;
  for (std::size_t k = 0; k < kMittagLefflerMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    if (k > 0) pw *= w / kd;
    const Complex term = (k == 0) ? Complex(1.0) : pw * ((b - 1.0) / (b - 1.0 + kd));
    out.sum += term;
    const double t = std::abs(term);
    out.abs_sum += t;
    if (kd > threshold && t <= 1e-16 * (1.0 + std::abs(out.sum))) return out;
  }
  throw ConvergenceBudgetExceeded("mittag_leffler: term cap reached before the tail bound");
}

/// Adaptive Gauss-Kronrod (7/15) for complex integrands on [lo, hi].
template <typename F>
Complex gauss_kronrod(F&& f, double lo, double hi, double rel_tol, std::size_t max_intervals) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  struct Segment {
    double lo, hi;
    Complex value;
    double error;
  };
  auto rule = [&](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = f(c);
    Complex kron = wk[7] * fc;
    Complex gauss = wg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
      const Complex f1 = f(c - h * xk[j]);
      const Complex f2 = f(c + h * xk[j]);
      kron += wk[j] * (f1 + f2);
      if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    return Segment{a, b, kron * h, std::abs((kron - gauss) * h)};
  };

  std::vector<Segment> segs{rule(lo, hi)};
  for (;;) {
    Complex total{};
    double err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (err <= rel_tol * std::abs(total) || err < 1e-300) return total;
    if (segs.size() >= max_intervals) {
      throw ConvergenceBudgetExceeded("mittag_leffler: quadrature interval budget exhausted");
    }
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.lo + s.hi);
    segs[worst] = rule(s.lo, mid);
    segs.push_back(rule(mid, s.hi));
  }
}

/// E_{1,b}(z) through (1/Γ(b−1)) ∫_0^1 e^{zt} (1−t)^{b−2} dt, valid for
/// b > 1 and free of endpoint blow-up for b ≥ 2; smaller b is shifted
/// upward with E_{1,b} = 1/Γ(b) + z E_{1,b+1}.
inline Complex ml_integral(double b, Complex z) {
  if (b >= 2.0) {
    const double e = b - 2.0;
    auto integrand = [&](double t) {
      return e == 0.0 ? std::exp(z * t) : std::exp(z * t) * std::pow(1.0 - t, e);
    };
    return rgamma(b - 1.0) * gauss_kronrod(integrand, 0.0, 1.0, 1e-14, 4000);
  }
  return rgamma(b) + z * ml_integral(b + 1.0, z);
}

/// E_{1,b}(z) = z^{1−b} e^z − z^{1−b} e^z Γ(b−1, z)/Γ(b−1), with the scaled
/// incomplete Gamma from its Legendre continued fraction (modified Lentz).
/// Returns false when the fraction has not settled after max_terms.
inline bool ml_continued_fraction(double b, Complex z, Complex& out, int max_terms = 2000) {
  const double s = b - 1.0;
  constexpr double tiny = 1e-300;
  Complex bk = z + 1.0 - s;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / bk;
  Complex h = d;
  for (int i = 1; i <= max_terms; ++i) {
    const double an = -i * (i - s);
    bk += 2.0;
    d = an * d + bk;
    if (std::abs(d) < tiny) d = tiny;
    c = bk + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      out = std::exp((1.0 - b) * std::log(z) + z) - rgamma(s) * h;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Two-parameter Mittag-Leffler function E_{a,b}(z) = Σ z^k / Γ(ak+b).
///
/// The Taylor series is summed directly, with terms formed in log-Gamma
/// form. When the sum loses more than three digits to cancellation and
/// a = 1, it is recomputed from the incomplete-Gamma continued fraction, the
/// Kummer-transformed series (Re z < 0) or the integral representation.
inline Complex mittag_leffler(MLParams p, Complex z) {
  if (!(p.a > 0.0 && p.a <= 2.0) || !std::isfinite(p.b)) {
    throw DomainError("mittag_leffler: parameter a must lie in (0, 2]");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("mittag_leffler: non-finite argument");
  }
  if (std::abs(z) > kMittagLefflerZMax) {
    throw DomainError("mittag_leffler: |z| exceeds the series budget");
  }
  if (z == Complex(0.0)) return rgamma(p.b);

  constexpr double kMaxCancellation = 1e3;
  const auto taylor = detail::ml_taylor(p.a, p.b, z);
  if (p.a != 1.0 || taylor.abs_sum <= kMaxCancellation * std::abs(taylor.sum)) {
    return taylor.sum;
  }
  if (detail::is_nonpositive_integer(p.b)) {
    // E_{1,-n}(z) = z^{n+1} e^z
    return std::pow(z, static_cast<int>(1.0 - p.b)) * std::exp(z);
  }
  Complex cf;
  const bool on_cut = z.imag() == 0.0 && z.real() < 0.0;
  if (std::abs(z) >= 8.0 && !on_cut && detail::ml_continued_fraction(p.b, z, cf)) {
    return cf;
  }
  if (z.real() < 0.0) {
    const auto kummer = detail::ml_kummer(p.b, -z);
    if (kummer.abs_sum <= kMaxCancellation * std::abs(kummer.sum)) {
      return std::exp(z) * rgamma(p.b) * kummer.sum;
    }
  }
  return detail::ml_integral(p.b, z);
}

}  // namespace fracroot
