#pragma once

// Target function class: sums of power terms c·(x − a)^p and exponential
// terms d·e^{λx}, with closed-form Caputo and Riemann–Liouville derivatives
// and a singular-kernel quadrature oracle for real arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fracroot/errors.hpp"
#include "fracroot/power.hpp"
#include "fracroot/specfun.hpp"

namespace fracroot {

struct PowerTerm {
  Complex coeff;
  double exponent = 0.0;
};

struct ExpTerm {
  Complex coeff;
  Complex rate;
};

enum class DerivativeKind { Caputo, RiemannLiouville };

inline const char* to_string(DerivativeKind kind) {
  return kind == DerivativeKind::Caputo ? "caputo" : "riemann-liouville";
}

/// Kind, order α ∈ (0, 1] and base point a of a fractional derivative.
struct FracSpec {
  DerivativeKind kind = DerivativeKind::Caputo;
  double alpha = 1.0;
  double base = 0.0;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw DomainError("FracSpec: alpha must lie in (0, 1]");
    }
    if (!std::isfinite(base)) throw DomainError("FracSpec: base must be finite");
  }
};

namespace detail {

inline bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// Terms s^{offset + n}, n = 0..coeffs.size()-1, sharing one non-integer
// part; evaluated as s^offset times a Horner polynomial.
struct PowerGroup {
  double offset = 0.0;
  std::vector<Complex> coeffs;
};

inline std::vector<PowerGroup> group_powers(const std::vector<std::pair<double, Complex>>& terms) {
  std::vector<PowerGroup> groups;
  for (const auto& [q, c] : terms) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const PowerGroup& g) {
      return is_integer(q - g.offset);
    });
    if (it == groups.end()) {
      groups.push_back(PowerGroup{q, {c}});
      continue;
    }
    if (q < it->offset) {
      const auto shift = static_cast<std::size_t>(it->offset - q);
      it->coeffs.insert(it->coeffs.begin(), shift, Complex{});
      it->offset = q;
    }
    const auto n = static_cast<std::size_t>(q - it->offset);
    if (n >= it->coeffs.size()) it->coeffs.resize(n + 1);
    it->coeffs[n] += c;
  }
  return groups;
}

inline Complex horner(const std::vector<Complex>& coeffs, Complex s) {
  Complex acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

/// Σ term(i) for i < n, added in increasing magnitude so the result does not
/// depend on the order in which the terms were declared.
template <class Term>
Complex sum_by_magnitude(std::size_t n, Term term) {
  if (n == 1) return term(0);
  std::array<Complex, 8> small;
  std::vector<Complex> large;
  Complex* v = small.data();
  if (n > small.size()) {
    large.resize(n);
    v = large.data();
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = term(i);
  std::sort(v, v + n, [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  Complex total{};
  for (std::size_t i = 0; i < n; ++i) total += v[i];
  return total;
}

/// Σ over groups of s^offset · poly(s); exact zero handling at s = 0.
inline Complex eval_groups(const std::vector<PowerGroup>& groups, Complex s) {
  Complex total{};
  if (s == Complex(0.0)) {
    for (const auto& g : groups) {
      for (std::size_t n = 0; n < g.coeffs.size(); ++n) {
        if (g.coeffs[n] == Complex(0.0)) continue;
        const double q = g.offset + static_cast<double>(n);
        if (q < 0.0) throw SingularityError("negative power evaluated at the reference point");
        if (q == 0.0) total += g.coeffs[n];
      }
    }
    return total;
  }
  const Complex log_s = principal_log(s);
  for (const auto& g : groups) {
    Complex scale = 1.0;
    if (g.offset != 0.0) {
      scale = is_integer(g.offset) ? std::pow(s, static_cast<int>(g.offset))
                                   : std::exp(g.offset * log_s);
    }
    total += scale * horner(g.coeffs, s);
  }
  return total;
}

}  // namespace detail

/// Immutable sum of power and exponential terms around a reference point.
class FunctionModel {
 public:
  FunctionModel() = default;

  FunctionModel(std::vector<PowerTerm> power_terms, std::vector<ExpTerm> exp_terms,
                double reference_point = 0.0)
      : exp_terms_(std::move(exp_terms)), reference_point_(reference_point) {
    if (!std::isfinite(reference_point_)) {
      throw DomainError("FunctionModel: reference point must be finite");
    }
    for (const auto& t : power_terms) {
      if (!(t.exponent >= 0.0) || !std::isfinite(t.exponent)) {
        throw DomainError("FunctionModel: power exponents must be finite and nonnegative");
      }
      if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
        throw DomainError("FunctionModel: coefficients must be finite");
      }
      auto it = std::find_if(power_terms_.begin(), power_terms_.end(),
                             [&](const PowerTerm& p) { return p.exponent == t.exponent; });
      if (it == power_terms_.end()) power_terms_.push_back(t);
      else it->coeff += t.coeff;
    }
    std::sort(power_terms_.begin(), power_terms_.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent > b.exponent; });
    for (const auto& t : exp_terms_) {
      if (!std::isfinite(std::abs(t.coeff)) || !std::isfinite(std::abs(t.rate))) {
        throw DomainError("FunctionModel: exponential terms must be finite");
      }
    }
    if (power_terms_.empty() && exp_terms_.empty()) {
      throw DomainError("FunctionModel: at least one term is required");
    }
    std::vector<std::pair<double, Complex>> flat;
    for (const auto& t : power_terms_) flat.emplace_back(t.exponent, t.coeff);
    groups_ = detail::group_powers(flat);
  }

  const std::vector<PowerTerm>& power_terms() const { return power_terms_; }
  const std::vector<ExpTerm>& exp_terms() const { return exp_terms_; }
  double reference_point() const { return reference_point_; }

  bool has_integer_exponents_only() const {
    return std::all_of(power_terms_.begin(), power_terms_.end(),
                       [](const PowerTerm& t) { return detail::is_integer(t.exponent); });
  }

  /// Σ c_j (x − a)^{p_j} + Σ d_m e^{λ_m x}, principal branch for fractional p.
  Complex operator()(Complex x) const {
    Complex total = detail::eval_groups(groups_, x - reference_point_);
    if (exp_terms_.empty()) return total;
    return total + detail::sum_by_magnitude(exp_terms_.size(), [&](std::size_t i) {
             return exp_terms_[i].coeff * std::exp(exp_terms_[i].rate * x);
           });
  }

 private:
  std::vector<PowerTerm> power_terms_;
  std::vector<ExpTerm> exp_terms_;
  double reference_point_ = 0.0;
  std::vector<detail::PowerGroup> groups_;
};

inline Complex eval(const FunctionModel& f, Complex x) { return f(x); }

/// Ordinary derivative of integer order (term-wise).
inline Complex classical_derivative(const FunctionModel& f, Complex x, unsigned order = 1) {
  const Complex s = x - f.reference_point();
  Complex total{};
  for (const auto& t : f.power_terms()) {
    double factor = 1.0;
    for (unsigned i = 0; i < order; ++i) factor *= t.exponent - static_cast<double>(i);
    if (factor == 0.0) continue;
    const double q = t.exponent - static_cast<double>(order);
    if (s == Complex(0.0)) {
      if (q < 0.0) throw SingularityError("classical_derivative: singular at the reference point");
      if (q == 0.0) total += t.coeff * factor;
      continue;
    }
    const Complex sq = detail::is_integer(q) ? std::pow(s, static_cast<int>(q))
                                             : principal_power(s, q);
    total += t.coeff * factor * sq;
  }
  const auto& e = f.exp_terms();
  if (e.empty()) return total;
  return total + detail::sum_by_magnitude(e.size(), [&](std::size_t i) {
           return e[i].coeff * std::pow(e[i].rate, static_cast<int>(order)) * std::exp(e[i].rate * x);
         });
}

/// Fractional derivative of arbitrary positive order with precomputed
/// coefficients. Integer orders defer to classical_derivative.
///
/// Power terms follow c·Γ(p+1)/Γ(p+1−β)·s^{p−β}, s = x − base (Caputo drops
/// integer exponents below β). Exponential terms need base 0 and resum into
/// Mittag-Leffler form: Caputo d·λ^m s^{m−β} E_{1,m+1−β}(λs) with
/// m = ⌈β⌉, Riemann–Liouville d·s^{−β} E_{1,1−β}(λs).
class FracDerivative {
 public:
  FracDerivative(const FunctionModel& f, DerivativeKind kind, double order, double base)
      : f_(&f), kind_(kind), order_(order), base_(base) {
    if (!(order > 0.0) || !std::isfinite(order)) {
      throw DomainError("frac_derivative: order must be positive");
    }
    if (detail::is_integer(order)) {
      integer_order_ = static_cast<unsigned>(order);
      return;
    }
    if (f.reference_point() != base) {
      throw BaseMismatchError("frac_derivative: model reference point differs from the base");
    }
    if (!f.exp_terms().empty() && base != 0.0) {
      throw ExpBaseError("frac_derivative: exponential terms require base 0");
    }
    const double m = std::ceil(order);
    std::vector<std::pair<double, Complex>> out;
    for (const auto& t : f.power_terms()) {
      const double p = t.exponent;
      if (kind == DerivativeKind::Caputo && detail::is_integer(p) && p < order) continue;
      const double ratio = gamma(p + 1.0) * rgamma(p + 1.0 - order);
      if (ratio == 0.0) continue;
      out.emplace_back(p - order, t.coeff * ratio);
    }
    groups_ = detail::group_powers(out);
    for (const auto& t : f.exp_terms()) {
      if (kind == DerivativeKind::Caputo) {
        exp_terms_.push_back(
            {t.coeff * std::pow(t.rate, static_cast<int>(m)), t.rate, m - order, m + 1.0 - order});
      } else {
        exp_terms_.push_back({t.coeff, t.rate, -order, 1.0 - order});
      }
    }
  }

  FracDerivative(const FunctionModel& f, const FracSpec& spec)
      : FracDerivative(f, (spec.validate(), spec.kind), spec.alpha, spec.base) {}

  DerivativeKind kind() const { return kind_; }
  double order() const { return order_; }
  double base() const { return base_; }

  Complex operator()(Complex x) const {
    if (integer_order_ > 0) return classical_derivative(*f_, x, integer_order_);
    const Complex s = x - base_;
    const Complex total = detail::eval_groups(groups_, s);
    if (exp_terms_.empty()) return total;
    if (s == Complex(0.0)) {
      for (const auto& t : exp_terms_) {
        if (t.power < 0.0) throw SingularityError("frac_derivative: singular at the base point");
      }
      return total;  // s^{power} = 0 for power > 0
    }
    return total + detail::sum_by_magnitude(exp_terms_.size(), [&](std::size_t i) {
             const auto& t = exp_terms_[i];
             return t.coeff * principal_power(s, t.power) * mittag_leffler({1.0, t.ml_b}, t.rate * s);
           });
  }

 private:
  struct ExpPiece {
    Complex coeff;
    Complex rate;
    double power;
    double ml_b;
  };

  const FunctionModel* f_;
  DerivativeKind kind_;
  double order_;
  double base_;
  unsigned integer_order_ = 0;
  std::vector<detail::PowerGroup> groups_;
  std::vector<ExpPiece> exp_terms_;
};

/// Closed-form fractional derivative of order spec.alpha at x. α = 1 is the
/// classical derivative.
inline Complex frac_derivative(const FunctionModel& f, const FracSpec& spec, Complex x) {
  return FracDerivative(f, spec)(x);
}

/// Fractional derivative of arbitrary positive order (used for the jα
/// derivatives in the error-constant analysis).
inline Complex frac_derivative_of_order(const FunctionModel& f, DerivativeKind kind,
                                        double order, double base, Complex x) {
  return FracDerivative(f, kind, order, base)(x);
}

namespace detail {

/// Tanh-sinh quadrature of g over [0, len]. The integrand receives the
/// abscissa and its distance to the right endpoint (accurate near it).
template <typename G>
Complex tanh_sinh(G&& g, double len, double abs_tol, std::size_t max_evals) {
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  std::size_t evals = 0;
  auto sample = [&](double t) -> Complex {
    const double sh = kHalfPi * std::sinh(t);
    const double ch = std::cosh(sh);
    const double weight = kHalfPi * std::cosh(t) / (ch * ch);
    // 1 ∓ tanh(sh) computed without cancellation
    const double left = 1.0 / (1.0 + std::exp(2.0 * sh));    // (1 - tanh)/2
    const double right = 1.0 / (1.0 + std::exp(-2.0 * sh));  // (1 + tanh)/2
    const double u = len * right;
    const double to_end = len * left;
    ++evals;
    if (!(u > 0.0) || !(to_end > 0.0)) return Complex{};
    return g(u, to_end) * (weight * len * 0.5);
  };
  constexpr double kTMax = 6.5;
  double h = 0.5;
  Complex sum = sample(0.0);
  for (double t = h; t <= kTMax; t += h) sum += sample(t) + sample(-t);
  Complex estimate = sum * h;
  for (int level = 0; level < 20; ++level) {
    h *= 0.5;
    Complex added{};
    for (double t = h; t <= kTMax; t += 2.0 * h) added += sample(t) + sample(-t);
    sum += added;
    const Complex next = sum * h;
    if (level >= 2 && std::abs(next - estimate) < abs_tol) return next;
    estimate = next;
    if (evals > max_evals) break;
  }
  throw QuadratureError("frac_derivative_quadrature: tolerance not met within the evaluation budget");
}

}  // namespace detail

/// Fractional derivative at real x > base by direct quadrature of the
/// defining singular integral. The substitution u = (x − t)^{1−α} removes
/// the kernel singularity. Riemann–Liouville adds the boundary term
/// f(base)(x − base)^{−α}/Γ(1−α) to the Caputo integral.
inline Complex frac_derivative_quadrature(const FunctionModel& f, const FracSpec& spec, double x) {
  spec.validate();
  const double a = spec.base;
  if (!(x > a)) throw DomainError("frac_derivative_quadrature: x must exceed the base point");
  if (spec.alpha == 1.0) return classical_derivative(f, x);
  const double alpha = spec.alpha;
  const double span = x - a;
  const double q = 1.0 / (1.0 - alpha);
  const double upper = std::pow(span, 1.0 - alpha);
  auto integrand = [&](double u, double to_end) -> Complex {
    // t − a = span·(1 − (1 − to_end/upper)^q), accurate as t → a
    const double dist = -span * std::expm1(q * std::log1p(-to_end / upper));
    if (!(dist > 0.0)) return Complex{};
    (void)u;
    return classical_derivative(f, Complex(a + dist, 0.0));
  };
  Complex integral = detail::tanh_sinh(integrand, upper, 1e-10, 1000000) * rgamma(2.0 - alpha);
  if (spec.kind == DerivativeKind::RiemannLiouville) {
    integral += f(Complex(a, 0.0)) * std::pow(span, -alpha) * rgamma(1.0 - alpha);
  }
  return integral;
}

/// Re-expands integer power terms about new_base via the binomial theorem.
inline FunctionModel recenter_powers(const FunctionModel& f, double new_base) {
  if (!f.has_integer_exponents_only()) {
    throw NonIntegerExponentError("recenter_powers: exponents must be nonnegative integers");
  }
  if (!f.exp_terms().empty() && new_base != 0.0) {
    throw ExpBaseError("recenter_powers: exponential terms require base 0");
  }
  const double shift = new_base - f.reference_point();
  std::map<unsigned, Complex> acc;
  for (const auto& t : f.power_terms()) {
    const auto p = static_cast<unsigned>(t.exponent);
    for (unsigned k = 0; k <= p; ++k) {
      acc[k] += t.coeff * binom_general(static_cast<double>(p), k) * std::pow(shift, p - k);
    }
  }
  std::vector<PowerTerm> terms;
  for (const auto& [k, c] : acc) terms.push_back({c, static_cast<double>(k)});
  return FunctionModel(std::move(terms), f.exp_terms(), new_base);
}

}  // namespace fracroot
