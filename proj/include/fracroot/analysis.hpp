#pragma once

// Convergence diagnostics: ACOC and the asymptotic error constants of the
// fractional Newton and Traub schemes.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "fracroot/errors.hpp"
#include "fracroot/funcmodel.hpp"
#include "fracroot/power.hpp"
#include "fracroot/solvers.hpp"
#include "fracroot/specfun.hpp"

namespace fracroot {

/// Displacement applied to the evaluation point when the fractional
/// derivative is singular exactly at the root.
inline constexpr double kSingularDisplacement = 1e-4;

struct ErrorConstants {
  Complex C2;
  Complex C3;
  Complex A;
  Complex B;
  Complex newton_constant;  // coefficient of e_k^{α+1} for the *FN2 schemes
  Complex traub_constant;   // coefficient of e_k^{2α+1} as stated (A, B form)
  Complex traub_constant_rederived;  // G2/(αG1²)·newton_constant·C2
};

/// Fractional derivative of arbitrary positive order (integer orders are
/// classical derivatives).
inline Complex derivative_of_order(const FunctionModel& f, DerivativeKind kind, double order,
                                   double base, Complex x) {
  return frac_derivative_of_order(f, kind, order, base, x);
}

/// Refines an approximate root with classical Newton steps.
inline Complex polish_root(const FunctionModel& f, Complex guess, int max_steps = 60) {
  Complex x = guess;
  for (int i = 0; i < max_steps; ++i) {
    const Complex d = classical_derivative(f, x);
    if (std::abs(d) < kDerivativeZeroThreshold) break;
    const Complex step = f(x) / d;
    x -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x))) break;
  }
  return x;
}

namespace detail {

inline Complex eval_point(const FunctionModel& f, Complex root, double alpha,
                          DerivativeKind kind, double base) {
  try {
    (void)derivative_of_order(f, kind, alpha, base, root);
    return root;
  } catch (const SingularityError&) {
    if (kind != DerivativeKind::RiemannLiouville) throw;
    return root + kSingularDisplacement;
  }
}

inline Complex checked_alpha_derivative(const FunctionModel& f, Complex x, double alpha,
                                        DerivativeKind kind, double base) {
  const Complex d = derivative_of_order(f, kind, alpha, base, x);
  if (std::abs(d) < kDerivativeZeroThreshold) {
    if (x == Complex(base)) {
      throw SingularityError("taylor_coeff_C: derivative degenerates at the base point");
    }
    throw DerivativeZeroError("taylor_coeff_C: fractional derivative vanishes at the root");
  }
  return d;
}

}  // namespace detail

/// C_j = Γ(α+1)/Γ(jα+1) · D^{jα}f(x*) / D^{α}f(x*), with x* the root
/// (displaced along the real axis when the R-L derivative is singular there).
inline Complex taylor_coeff_C(const FunctionModel& f, Complex root, double alpha, int j,
                              DerivativeKind kind, double base = 0.0) {
  if (j < 2) throw DomainError("taylor_coeff_C: j must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("taylor_coeff_C: alpha must lie in (0, 1]");
  const Complex x = detail::eval_point(f, root, alpha, kind, base);
  const Complex d1 = detail::checked_alpha_derivative(f, x, alpha, kind, base);
  const double ja = j * alpha;
  const Complex dj = derivative_of_order(f, kind, ja, base, x);
  return gamma(alpha + 1.0) * rgamma(ja + 1.0) * dj / d1;
}

inline ErrorConstants error_constants(const FunctionModel& f, Complex root, double alpha,
                                      DerivativeKind kind, double base = 0.0) {
  ErrorConstants ec;
  ec.C2 = taylor_coeff_C(f, root, alpha, 2, kind, base);
  ec.C3 = taylor_coeff_C(f, root, alpha, 3, kind, base);
  const double g1 = gamma(alpha + 1.0);
  const double g2 = gamma(2.0 * alpha + 1.0);
  const double g3 = gamma(3.0 * alpha + 1.0);
  const double g1sq = g1 * g1;
  const double k = (g2 - g1sq) / (alpha * g1sq);
  const Complex c2 = ec.C2;
  const Complex c2sq = c2 * c2;

  ec.newton_constant = k * c2;
  ec.A = principal_power(Complex(k), alpha) * principal_power(c2, alpha);
  const Complex bracket =
      (1.0 / alpha) * ((g3 - g2 * g1) / g2 * ec.C3 + g2 * (g1sq - g2) / (g1sq * g1) * c2sq) +
      (1.0 / (2.0 * alpha)) * (1.0 - 1.0 / alpha) * ((g1sq - g2) * (g1sq - g2) / (g1sq * g1sq)) *
          c2sq;
  ec.B = alpha * principal_power(Complex(k), alpha - 1.0) * principal_power(c2, alpha - 1.0) *
         bracket;
  ec.traub_constant =
      ec.B / (alpha * principal_power(ec.A, 1.0 - 1.0 / alpha) * principal_power(c2, alpha - 1.0)) +
      (1.0 / alpha) * (ec.A * g2 / g1sq - ec.B);
  ec.traub_constant_rederived = g2 / (alpha * g1sq) * ec.newton_constant * c2;
  return ec;
}

/// Errors below this are treated as noise in the ACOC estimate.
inline double acoc_noise_floor(Complex root) {
  return 10.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(root));
}

/// ln(e_{k+1}/e_k)/ln(e_k/e_{k−1}) over the last strictly decreasing
/// triple of errors lying above floor.
inline double acoc_from_errors(const std::vector<double>& errors, double floor = 0.0) {
  if (errors.size() < 4) throw InsufficientDataError("acoc: at least 4 iterates are required");
  for (std::size_t k = errors.size() - 1; k >= 2; --k) {
    const double e0 = errors[k - 2], e1 = errors[k - 1], e2 = errors[k];
    if (e2 > floor && e2 < e1 && e1 < e0) {
      const double den = std::log(e1 / e0);
      if (den == 0.0) continue;
      return std::log(e2 / e1) / den;
    }
  }
  throw InsufficientDataError("acoc: no strictly decreasing error triple above the noise floor");
}

inline std::vector<double> trace_errors(const IterationTrace& trace, Complex root) {
  std::vector<double> e;
  e.reserve(trace.iterates.size());
  for (const auto& x : trace.iterates) e.push_back(std::abs(x - root));
  return e;
}

inline double acoc(const IterationTrace& trace, Complex root) {
  return acoc_from_errors(trace_errors(trace, root), acoc_noise_floor(root));
}

/// Geometric mean of |e_{k+1}|/|e_k|^order over the last `pairs` decreasing
/// error pairs above the noise floor.
inline double empirical_error_constant(const IterationTrace& trace, Complex root, double order,
                                       int pairs = 3) {
  const auto e = trace_errors(trace, root);
  const double floor = acoc_noise_floor(root);
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t k = e.size() - 1; k >= 1 && used < pairs; --k) {
    if (e[k] > floor && e[k] < e[k - 1]) {
      log_sum += std::log(e[k]) - order * std::log(e[k - 1]);
      ++used;
    }
  }
  if (used < pairs) throw InsufficientDataError("empirical_error_constant: too few admissible pairs");
  return std::exp(log_sum / used);
}

}  // namespace fracroot
