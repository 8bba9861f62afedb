#pragma once

/**
 * @file ode.hpp
 * @brief Residual checks of the first-order ODEs satisfied by the pathway
 * kernel g(x) = x^(gamma-1) [1 - s(1-alpha) x^delta]^(beta/(1-alpha)).
 *
 * The left side is always a central difference of g, so each check is
 * independent of the closed-form right side it is compared against:
 *
 *   general        x g' = (gamma-1) x^(gamma-1) B^(beta/(1-alpha))
 *                         - s beta delta x^(delta+gamma-1) B^(beta/(1-alpha) - 1)
 *   reduced_beta   x g' = (gamma-1) g - s beta delta g^(1-(1-alpha)/beta)
 *                  when delta = (gamma-1)(alpha-1)/beta, gamma != 1, alpha > 1
 *   reduced_beta1  x g' = (gamma-1) g - s delta g^alpha         (beta = 1)
 *   tsallis_eta    g'   = -s beta g^eta,  eta = 1 - (1-alpha)/beta  (gamma = delta = 1)
 *   tsallis_alpha  g'   = -s g^alpha                             (beta = 1)
 *
 * with B = 1 - s(1-alpha) x^delta.
 */

#include <pathent/error.hpp>
#include <pathent/pathway.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace pathent::ode {

using pathway::PathwayParams;

enum class Reduction { general, reduced_beta, reduced_beta1, tsallis_eta, tsallis_alpha };

inline std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::general: return "general";
    case Reduction::reduced_beta: return "reduced-beta";
    case Reduction::reduced_beta1: return "reduced-beta1";
    case Reduction::tsallis_eta: return "tsallis-eta";
    case Reduction::tsallis_alpha: return "tsallis-alpha";
  }
  return "unknown";
}

inline Reduction parse_reduction(std::string_view name) {
  for (Reduction r : {Reduction::general, Reduction::reduced_beta, Reduction::reduced_beta1,
                      Reduction::tsallis_eta, Reduction::tsallis_alpha}) {
    if (name == reduction_name(r)) return r;
  }
  throw UnknownName("unknown ODE reduction '" + std::string(name) + "'");
}

class OdeCase {
public:
  /// Validates the parameter constraints that the chosen reduction needs.
  /// `omit_beta_factor` switches tsallis_eta to the shortened right side
  /// -s g^eta, which only agrees with the kernel when beta = 1.
  OdeCase(const PathwayParams& params, Reduction reduction, bool omit_beta_factor = false)
      : params_(params), reduction_(reduction), omit_beta_factor_(omit_beta_factor) {
    params_.validate();
    const auto& p = params_;
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    switch (reduction_) {
      case Reduction::general:
        break;
      case Reduction::reduced_beta:
      case Reduction::reduced_beta1:
        if (p.gamma == 1.0) throw DomainError("reduced forms require gamma != 1");
        if (!(p.alpha > 1.0)) throw DomainError("reduced forms require alpha > 1");
        if (reduction_ == Reduction::reduced_beta1 && !close(p.beta_exp, 1.0)) {
          throw DomainError("reduced-beta1 requires beta = 1");
        }
        if (!close(p.delta, (p.gamma - 1.0) * (p.alpha - 1.0) / p.beta_exp)) {
          throw DomainError("reduced forms require delta = (gamma-1)(alpha-1)/beta");
        }
        break;
      case Reduction::tsallis_eta:
      case Reduction::tsallis_alpha:
        if (p.gamma != 1.0 || p.delta != 1.0) {
          throw DomainError("Tsallis forms require gamma = 1 and delta = 1");
        }
        if (p.alpha == 1.0) throw DomainError("Tsallis forms require alpha != 1");
        if (reduction_ == Reduction::tsallis_alpha && !close(p.beta_exp, 1.0)) {
          throw DomainError("tsallis-alpha requires beta = 1");
        }
        break;
    }
  }

  const PathwayParams& params() const noexcept { return params_; }
  Reduction reduction() const noexcept { return reduction_; }
  double eta() const noexcept { return 1.0 - (1.0 - params_.alpha) / params_.beta_exp; }

  /// True when the left side is g' rather than x g'.
  bool plain_derivative() const noexcept {
    return reduction_ == Reduction::tsallis_eta || reduction_ == Reduction::tsallis_alpha;
  }

  double g(double x) const { return pathway::kernel(params_, x); }

  /// Closed-form g'(x) from the logarithmic derivative.
  double derivative(double x) const {
    const auto& p = params_;
    const double xd = std::pow(x, p.delta);
    const double base = 1.0 - p.s * (1.0 - p.alpha) * xd;
    return g(x) * ((p.gamma - 1.0) / x - p.s * p.beta_exp * p.delta * xd / (x * base));
  }

  /// Right-hand side of the selected equation at x.
  double rhs(double x) const {
    const auto& p = params_;
    const double gx = g(x);
    switch (reduction_) {
      case Reduction::general: {
        const double xd = std::pow(x, p.delta);
        double outer = 0.0;  // B^(beta/(1-alpha))
        double inner = 0.0;  // B^(beta/(1-alpha) - 1)
        if (p.alpha == 1.0) {
          outer = std::exp(-p.s * p.beta_exp * xd);
          inner = outer;
        } else {
          const double lb = std::log1p(-p.s * (1.0 - p.alpha) * xd);
          const double e = p.beta_exp / (1.0 - p.alpha);
          outer = std::exp(e * lb);
          inner = std::exp((e - 1.0) * lb);
        }
        return (p.gamma - 1.0) * std::pow(x, p.gamma - 1.0) * outer -
               p.s * p.beta_exp * p.delta * std::pow(x, p.delta + p.gamma - 1.0) * inner;
      }
      case Reduction::reduced_beta:
        return (p.gamma - 1.0) * gx -
               p.s * p.beta_exp * p.delta * std::pow(gx, 1.0 - (1.0 - p.alpha) / p.beta_exp);
      case Reduction::reduced_beta1:
        return (p.gamma - 1.0) * gx - p.s * p.delta * std::pow(gx, p.alpha);
      case Reduction::tsallis_eta: {
        const double coef = omit_beta_factor_ ? p.s : p.s * p.beta_exp;
        return -coef * std::pow(gx, eta());
      }
      case Reduction::tsallis_alpha:
        return -p.s * std::pow(gx, p.alpha);
    }
    return 0.0;
  }

private:
  PathwayParams params_;
  Reduction reduction_;
  bool omit_beta_factor_;
};

struct PointReport {
  double x = 0.0;
  double lhs = 0.0;           // from the central difference
  double lhs_analytic = 0.0;  // from the closed-form derivative
  double rhs = 0.0;
  double residual = 0.0;      // |lhs - rhs|
};

/// Central-difference step cbrt(eps) * max(1, |x|).
inline double default_step(double x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
}

inline PointReport evaluate(const OdeCase& c, double x, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const auto sup = pathway::support(c.params());
  if (!(x - h > sup.lower) || !(x + h < sup.upper)) {
    throw DomainError("stencil [x-h, x+h] leaves the interior of the support");
  }
  const double fd = (c.g(x + h) - c.g(x - h)) / (2.0 * h);
  const double factor = c.plain_derivative() ? 1.0 : x;
  PointReport r;
  r.x = x;
  r.lhs = factor * fd;
  r.lhs_analytic = factor * c.derivative(x);
  r.rhs = c.rhs(x);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

inline double residual(const OdeCase& c, double x, double h) { return evaluate(c, x, h).residual; }

struct SweepRange {
  double lower = 0.0;
  double upper = 0.0;
};

/// [0.05, 5] times the scale s^(-1/delta) on the half-line, or
/// [0.05, 0.9] times the upper support endpoint for bounded support.
inline SweepRange default_sweep_range(const PathwayParams& p) {
  const auto sup = pathway::support(p);
  if (std::isfinite(sup.upper)) return {0.05 * sup.upper, 0.9 * sup.upper};
  const double sc = std::pow(p.s, -1.0 / p.delta);
  return {0.05 * sc, 5.0 * sc};
}

struct SweepReport {
  double max_residual = 0.0;
  double argmax = 0.0;
  int points = 0;
};

/// Log-spaced sweep locations x_i = lo (hi/lo)^((i+1/2)/n).
inline std::vector<double> sweep_points(int n_points, SweepRange range) {
  std::vector<double> xs;
  const double ratio = range.upper / range.lower;
  for (int i = 0; i < n_points; ++i) {
    xs.push_back(range.lower * std::pow(ratio, (i + 0.5) / n_points));
  }
  return xs;
}

/// Worst residual over the sweep points; a single point sits at the
/// geometric midpoint of the range.
inline SweepReport residual_sweep(const OdeCase& c, int n_points, double h, SweepRange range) {
  if (n_points < 1) throw DomainError("sweep needs at least one point");
  if (!(range.lower > 0.0 && range.upper > range.lower)) {
    throw DomainError("sweep range must satisfy 0 < lower < upper");
  }
  SweepReport rep;
  const auto xs = sweep_points(n_points, range);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double r = residual(c, x, h);
    if (i == 0 || r > rep.max_residual) {
      rep.max_residual = r;
      rep.argmax = x;
    }
  }
  rep.points = n_points;
  return rep;
}

inline SweepReport residual_sweep(const OdeCase& c, int n_points, double h) {
  return residual_sweep(c, n_points, h, default_sweep_range(c.params()));
}

}  // namespace pathent::ode
