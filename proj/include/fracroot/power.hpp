#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "fracroot/errors.hpp"

namespace fracroot {

/// Principal argument in (-π, π]; the sign of a zero imaginary part is ignored.
inline double principal_arg(std::complex<double> z) {
  const double a = std::arg(z);
  return (a == -std::numbers::pi) ? std::numbers::pi : a;
}

/// Principal logarithm ln|z| + i·Arg z.
inline std::complex<double> principal_log(std::complex<double> z) {
  return {std::log(std::abs(z)), principal_arg(z)};
}

/// z^r = exp(r·(ln|z| + i·Arg z)) with Arg in (-π, π]; 0^r = 0 for r > 0.
inline std::complex<double> principal_power(std::complex<double> z, double r) {
  if (z == std::complex<double>(0.0)) {
    if (r > 0.0) return 0.0;
    throw DomainError("principal_power: zero raised to a nonpositive power");
  }
  if (r == 1.0) return z;
  if (r == 0.0) return 1.0;
  return std::exp(r * principal_log(z));
}

}  // namespace fracroot
