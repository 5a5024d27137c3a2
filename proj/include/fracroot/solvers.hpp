#pragma once

// Fractional Newton and Traub iterations and the iteration engine.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracroot/errors.hpp"
#include "fracroot/funcmodel.hpp"
#include "fracroot/power.hpp"
#include "fracroot/specfun.hpp"

namespace fracroot {

enum class MethodKind { CFN1, CFN2, RLFN1, RLFN2, CFT, RLFT };

inline constexpr std::array<MethodKind, 6> kAllMethods = {
    MethodKind::CFN1, MethodKind::CFN2, MethodKind::RLFN1,
    MethodKind::RLFN2, MethodKind::CFT, MethodKind::RLFT};

inline std::string_view method_name(MethodKind m) {
  switch (m) {
    case MethodKind::CFN1: return "cfn1";
    case MethodKind::CFN2: return "cfn2";
    case MethodKind::RLFN1: return "rlfn1";
    case MethodKind::RLFN2: return "rlfn2";
    case MethodKind::CFT: return "cft";
    case MethodKind::RLFT: return "rlft";
  }
  return "?";
}

inline std::optional<MethodKind> parse_method(std::string_view name) {
  for (auto m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

inline DerivativeKind derivative_kind(MethodKind m) {
  switch (m) {
    case MethodKind::CFN1:
    case MethodKind::CFN2:
    case MethodKind::CFT: return DerivativeKind::Caputo;
    default: return DerivativeKind::RiemannLiouville;
  }
}

inline bool is_traub(MethodKind m) { return m == MethodKind::CFT || m == MethodKind::RLFT; }
inline bool is_damped(MethodKind m) { return m == MethodKind::CFN1 || m == MethodKind::RLFN1; }

struct SolverConfig {
  double alpha = 1.0;
  double base = 0.0;
  double step_tol = 1e-8;
  double residual_tol = 1e-8;
  int max_iter = 500;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("SolverConfig: alpha must lie in (0, 1]");
    if (!std::isfinite(base)) throw DomainError("SolverConfig: base must be finite");
    if (!(step_tol > 0.0) || !(residual_tol > 0.0)) {
      throw DomainError("SolverConfig: tolerances must be positive");
    }
    if (max_iter < 1) throw DomainError("SolverConfig: max_iter must be at least 1");
  }
};

enum class TraceStatus { ConvergedStep, ConvergedResidual, MaxIterations, NumericalFailure };

inline std::string_view status_name(TraceStatus s) {
  switch (s) {
    case TraceStatus::ConvergedStep: return "converged-step";
    case TraceStatus::ConvergedResidual: return "converged-residual";
    case TraceStatus::MaxIterations: return "max-iterations";
    case TraceStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

inline bool is_converged(TraceStatus s) {
  return s == TraceStatus::ConvergedStep || s == TraceStatus::ConvergedResidual;
}

struct IterationTrace {
  std::vector<Complex> iterates;  // x_0 .. x_K
  std::vector<double> residuals;  // |f(x_k)|
  TraceStatus status = TraceStatus::MaxIterations;
  int iterations = 0;
  std::string failure;  // message when status is NumericalFailure

  Complex final_iterate() const { return iterates.back(); }
  double final_residual() const { return residuals.back(); }
  double final_step() const {
    return iterates.size() < 2 ? 0.0
                               : std::abs(iterates.back() - iterates[iterates.size() - 2]);
  }
};

inline constexpr double kDerivativeZeroThreshold = 1e-30;

namespace detail {

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline Complex checked_derivative(const FracDerivative& d, Complex x) {
  const Complex v = d(x);
  if (std::abs(v) < kDerivativeZeroThreshold) {
    throw DerivativeZeroError("fractional derivative vanishes at the iterate");
  }
  return v;
}

// Γ(α+1)·f(x)/D^α f(x)
inline Complex quotient(const FunctionModel& f, const FracDerivative& d, double alpha, Complex x) {
  return gamma(alpha + 1.0) * f(x) / checked_derivative(d, x);
}

inline Complex newton1(const FunctionModel& f, const FracDerivative& d, double alpha, Complex x) {
  return x - quotient(f, d, alpha, x);
}

inline Complex newton2(const FunctionModel& f, const FracDerivative& d, double alpha, Complex x) {
  return x - principal_power(quotient(f, d, alpha, x), 1.0 / alpha);
}

inline Complex traub(const FunctionModel& f, const FracDerivative& d, double alpha, Complex x) {
  const double g = gamma(alpha + 1.0);
  const Complex dx = checked_derivative(d, x);
  const Complex y = x - principal_power(g * f(x) / dx, 1.0 / alpha);
  return y - principal_power(g * f(y) / dx, 1.0 / alpha);
}

}  // namespace detail

/// x − Γ(α+1)·f(x)/D^α f(x)
inline Complex newton1_step(const FunctionModel& f, Complex x, const FracSpec& spec) {
  return detail::newton1(f, FracDerivative(f, spec), spec.alpha, x);
}

/// x − (Γ(α+1)·f(x)/D^α f(x))^{1/α}
inline Complex newton2_step(const FunctionModel& f, Complex x, const FracSpec& spec) {
  return detail::newton2(f, FracDerivative(f, spec), spec.alpha, x);
}

/// Newton2 predictor y, then y − (Γ(α+1)·f(y)/D^α f(x))^{1/α}.
inline Complex traub_step(const FunctionModel& f, Complex x, const FracSpec& spec) {
  return detail::traub(f, FracDerivative(f, spec), spec.alpha, x);
}

/// Runs the method from x0 until the step or residual tolerance is met,
/// max_iter steps are taken, or the arithmetic breaks down. The residual at
/// x0 is checked before the first step; afterwards the step criterion is
/// tested before the residual criterion.
inline IterationTrace solve(MethodKind method, const FunctionModel& f, Complex x0,
                            const SolverConfig& config) {
  config.validate();
  IterationTrace trace;
  trace.iterates.push_back(x0);
  auto fail = [&](std::string msg) {
    trace.status = TraceStatus::NumericalFailure;
    trace.failure = std::move(msg);
    return trace;
  };

  double r0 = 0.0;
  try {
    r0 = std::abs(f(x0));
  } catch (const Error& e) {
    trace.residuals.push_back(std::nan(""));
    return fail(e.what());
  }
  trace.residuals.push_back(r0);
  if (!std::isfinite(r0)) return fail("non-finite residual at the initial estimate");
  if (r0 < config.residual_tol) {
    trace.status = TraceStatus::ConvergedResidual;
    return trace;
  }

  const FracSpec spec{derivative_kind(method), config.alpha, config.base};
  std::optional<FracDerivative> deriv;
  try {
    deriv.emplace(f, spec);
  } catch (const Error& e) {
    return fail(e.what());
  }

  Complex x = x0;
  for (int k = 0; k < config.max_iter; ++k) {
    Complex next;
    double r = 0.0;
    try {
      switch (method) {
        case MethodKind::CFN1:
        case MethodKind::RLFN1: next = detail::newton1(f, *deriv, config.alpha, x); break;
        case MethodKind::CFN2:
        case MethodKind::RLFN2: next = detail::newton2(f, *deriv, config.alpha, x); break;
        case MethodKind::CFT:
        case MethodKind::RLFT: next = detail::traub(f, *deriv, config.alpha, x); break;
      }
      if (!detail::finite(next)) return fail("non-finite iterate");
      r = std::abs(f(next));
    } catch (const Error& e) {
      return fail(e.what());
    }
    if (!std::isfinite(r)) return fail("non-finite residual");
    trace.iterates.push_back(next);
    trace.residuals.push_back(r);
    trace.iterations = k + 1;
    if (std::abs(next - x) < config.step_tol) {
      trace.status = TraceStatus::ConvergedStep;
      return trace;
    }
    if (r < config.residual_tol) {
      trace.status = TraceStatus::ConvergedResidual;
      return trace;
    }
    x = next;
  }
  trace.status = TraceStatus::MaxIterations;
  return trace;
}

}  // namespace fracroot
