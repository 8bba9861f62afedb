#pragma once

// Generalized inaccuracy of assigning q when the truth is f,
//
//   H_alpha(f : q) = (E_f[q^(alpha-1)] - 1) / (2^(1-alpha) - 1),
//
// and the expected-value form of the Mathai entropy,
// M_alpha(f) = (E_f[f^(1-alpha)] - 1) / (alpha - 1).

#include <pathent/continuous.hpp>
#include <pathent/discrete.hpp>
#include <pathent/error.hpp>
#include <pathent/numeric.hpp>
#include <pathent/quadrature.hpp>

#include <cmath>

namespace pathent {

namespace detail {

inline void validate_inaccuracy_order(AlphaOrder order) {
  const double a = order.value;
  if (!std::isfinite(a) || !(a > 0.0) || a == 1.0) {
    throw InvalidOrder("inaccuracy requires alpha > 0 and alpha != 1");
  }
}

// f q^exponent. A zero q under positive f is an error, except that a
// continuous q may underflow in a far tail; with a positive exponent the
// integrand's limit there is 0 and the point is simply dropped.
inline double q_power(double fx, double qx, double exponent, bool tail_underflow_ok = false) {
  if (fx <= 0.0) return 0.0;
  if (!(qx > 0.0)) {
    if (tail_underflow_ok && qx == 0.0 && exponent > 0.0) return 0.0;
    throw DomainError("assigned density vanishes where the true density is positive");
  }
  return fx * std::exp(exponent * std::log(qx));
}

}  // namespace detail

inline double kerridge_inaccuracy(const DiscreteDistribution& f, const DiscreteDistribution& q,
                                  AlphaOrder order) {
  detail::validate_inaccuracy_order(order);
  if (f.size() != q.size()) throw DomainError("f and q must have the same length");
  const double alpha = order.value;
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc += detail::q_power(f[i], q[i], alpha - 1.0);
  return (acc.value() - 1.0) / detail::havrda_charvat_denominator(alpha);
}

inline double kerridge_inaccuracy(const DensitySpec& f, const DensitySpec& q, AlphaOrder order,
                                  const QuadratureSpec& tol = {}) {
  detail::validate_inaccuracy_order(order);
  if (f.lower != q.lower || f.upper != q.upper) {
    throw DomainError("f and q must share the same support");
  }
  const double alpha = order.value;
  const double expectation = integrate(
      [&](double x) {
        return detail::q_power(f.clamped(x), q.clamped(x), alpha - 1.0, true);
      },
      f.quadrature(tol));
  return (expectation - 1.0) / detail::havrda_charvat_denominator(alpha);
}

/// |M_alpha from the integral of f^(2-alpha)  -  M_alpha from E_f[f^(1-alpha)]|.
/// The two are algebraically equal; the residual checks that both
/// quadrature paths agree.
inline double m_alpha_expectation_residual(const DensitySpec& f, AlphaOrder order,
                                           const QuadratureSpec& tol = {}) {
  validate_order(Family::mathai, order);
  const double alpha = order.value;
  if (alpha == 1.0) throw InvalidOrder("expected-value form requires alpha != 1");
  const double direct = continuous_entropy(f, Family::mathai, order, tol);
  const double expectation = integrate(
      [&](double x) {
        const double fx = f.clamped(x);
        return fx > 0.0 ? fx * std::exp((1.0 - alpha) * std::log(fx)) : 0.0;
      },
      f.quadrature(tol));
  return std::abs(direct - (expectation - 1.0) / (alpha - 1.0));
}

inline double m_alpha_expectation_residual(const DiscreteDistribution& p, AlphaOrder order) {
  validate_order(Family::mathai, order);
  const double alpha = order.value;
  if (alpha == 1.0) throw InvalidOrder("expected-value form requires alpha != 1");
  const double direct = entropy(p, Family::mathai, order);
  CompensatedSum acc;
  for (double v : p.probs()) {
    if (v > 0.0) acc += v * std::pow(v, 1.0 - alpha);
  }
  return std::abs(direct - (acc.value() - 1.0) / (alpha - 1.0));
}

}  // namespace pathent
