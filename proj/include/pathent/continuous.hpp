#pragma once

// Continuous analogues of the discrete families: sums become integrals of
// f^alpha (or f^(2-alpha), or f ln f) over the declared support.

#include <pathent/discrete.hpp>
#include <pathent/error.hpp>
#include <pathent/quadrature.hpp>

#include <cmath>
#include <functional>
#include <sstream>

namespace pathent {

/// A density callable with declared support. Construction optionally
/// checks that it integrates to one within 1e-8.
struct DensitySpec {
  std::function<double(double)> pdf;
  double lower = 0.0;
  double upper = 1.0;
  bool normalization_checked = false;

  DensitySpec() = default;
  DensitySpec(std::function<double(double)> f, double lo, double hi, bool check = true,
              const QuadratureSpec& tol = {})
      : pdf(std::move(f)), lower(lo), upper(hi), normalization_checked(check) {
    if (!pdf) throw DomainError("density callable is empty");
    if (!(lo < hi)) throw DomainError("density support requires lower < upper");
    if (check) {
      const double mass = integrate([this](double x) { return clamped(x); }, tol.over(lo, hi));
      if (!(std::abs(mass - 1.0) <= 1e-8)) {
        std::ostringstream os;
        os.precision(17);
        os << "density integrates to " << mass << ", not 1";
        throw InvalidDistribution(os.str());
      }
    }
  }

  /// pdf(x) with negative round-off clamped to zero.
  double clamped(double x) const {
    const double v = pdf(x);
    return v > 0.0 ? v : 0.0;
  }

  QuadratureSpec quadrature(const QuadratureSpec& tol) const { return tol.over(lower, upper); }
};

namespace detail {

inline double power_of(double v, double exponent) {
  return v > 0.0 ? std::exp(exponent * std::log(v)) : 0.0;
}

inline double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// Integral of f^exponent, or -integral f ln f when `shannon`.
inline double density_functional(const DensitySpec& f, bool shannon, double exponent,
                                 const QuadratureSpec& tol) {
  if (shannon) {
    return -integrate([&](double x) { return xlogx(f.clamped(x)); }, f.quadrature(tol));
  }
  return integrate([&](double x) { return power_of(f.clamped(x), exponent); },
                   f.quadrature(tol));
}

}  // namespace detail

inline double continuous_entropy(const DensitySpec& f, const EntropyFamily& family,
                                 AlphaOrder order, const QuadratureSpec& tol = {}) {
  validate_order(family.tag, order);
  const double alpha = order.value;
  if (family.tag == Family::shannon || alpha == 1.0) {
    return detail::limit_scale(family) * detail::density_functional(f, true, 0.0, tol);
  }
  const double integral =
      detail::density_functional(f, false, detail::power_exponent(family.tag, alpha), tol);
  return detail::family_value(family, alpha, integral - 1.0);
}

/// Residual of F(f x g) - [F(f) + F(g) + a F(f) F(g)] where the joint
/// functional is evaluated by iterated quadrature over the product support.
inline double composition_residual_continuous(const DensitySpec& f, const DensitySpec& g,
                                              const EntropyFamily& family, AlphaOrder order,
                                              const QuadratureSpec& tol = {}) {
  validate_order(family.tag, order);
  const double alpha = order.value;
  const bool shannon = family.tag == Family::shannon || alpha == 1.0;
  const double exponent = detail::power_exponent(family.tag, alpha);

  auto inner = [&](double x) {
    const double fx = f.clamped(x);
    if (fx == 0.0) return 0.0;
    if (shannon) {
      return -integrate([&](double y) { return detail::xlogx(fx * g.clamped(y)); },
                        g.quadrature(tol));
    }
    return integrate([&](double y) { return detail::power_of(fx * g.clamped(y), exponent); },
                     g.quadrature(tol));
  };
  const double joint_integral = integrate(inner, f.quadrature(tol));

  double joint = 0.0;
  if (shannon) {
    joint = detail::limit_scale(family) * joint_integral;
  } else {
    joint = detail::family_value(family, alpha, joint_integral - 1.0);
  }
  const double a = composition_coefficient(family, order);
  const double ff = continuous_entropy(f, family, order, tol);
  const double fg = continuous_entropy(g, family, order, tol);
  return joint - (ff + fg + a * ff * fg);
}

}  // namespace pathent
