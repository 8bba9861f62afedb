#pragma once

/**
 * @file pathway.hpp
 * @brief The scalar pathway family of densities on the half-line.
 *
 *   f(x) = c x^(gamma-1) [1 - s(1-alpha) x^delta]^(beta/(1-alpha))
 *
 * alpha < 1 gives a generalized type-1 beta density on a bounded interval,
 * alpha > 1 a generalized type-2 beta density on [0, inf), and alpha == 1
 * (selected by exact equality) the generalized gamma limit
 * c x^(gamma-1) exp(-beta s x^delta).
 *
 * The normalizing constant comes from the substitution t = s|1-alpha| x^delta:
 *
 *   alpha < 1:  1/c = B(gamma/delta, beta/(1-alpha) + 1)
 *                     / (delta [s(1-alpha)]^(gamma/delta))
 *   alpha > 1:  1/c = B(gamma/delta, beta/(alpha-1) - gamma/delta)
 *                     / (delta [s(alpha-1)]^(gamma/delta))
 *   alpha = 1:  1/c = Gamma(gamma/delta) / (delta (beta s)^(gamma/delta))
 *
 * For alpha > 1 the tail decays like x^(gamma - 1 - delta beta/(alpha-1)),
 * so the family is a density only when beta/(alpha-1) > gamma/delta.
 */

#include <pathent/continuous.hpp>
#include <pathent/error.hpp>
#include <pathent/numeric.hpp>
#include <pathent/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pathent::pathway {

struct PathwayParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double s = 1.0;
  double beta_exp = 1.0;

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(gamma) || !std::isfinite(delta) ||
        !std::isfinite(s) || !std::isfinite(beta_exp)) {
      throw DomainError("pathway parameters must be finite");
    }
    if (!(gamma > 0.0)) throw DomainError("pathway gamma must be positive");
    if (!(delta > 0.0)) throw DomainError("pathway delta must be positive");
    if (!(s > 0.0)) throw DomainError("pathway s must be positive");
    if (!(beta_exp > 0.0)) throw DomainError("pathway beta must be positive");
  }
};

enum class Regime { type1_beta, generalized_gamma, type2_beta };

inline Regime regime(const PathwayParams& p) {
  if (p.alpha < 1.0) return Regime::type1_beta;
  if (p.alpha > 1.0) return Regime::type2_beta;
  return Regime::generalized_gamma;
}

struct SupportInterval {
  double lower = 0.0;
  double upper = kInf;
};

inline SupportInterval support(const PathwayParams& p) {
  p.validate();
  if (p.alpha < 1.0) {
    return {0.0, std::pow(p.s * (1.0 - p.alpha), -1.0 / p.delta)};
  }
  return {0.0, kInf};
}

/// True when the kernel integrates to a finite value over its support.
inline bool is_normalizable(const PathwayParams& p) {
  p.validate();
  if (p.alpha <= 1.0) return true;
  return p.beta_exp / (p.alpha - 1.0) - p.gamma / p.delta > 0.0;
}

/// Unnormalized kernel x^(gamma-1) [1 - s(1-alpha) x^delta]^(beta/(1-alpha)).
/// Zero outside the support.
inline double kernel(const PathwayParams& p, double x) {
  if (!(x >= 0.0)) return 0.0;
  const double xd = std::pow(x, p.delta);
  double tail = 0.0;
  if (p.alpha == 1.0) {
    tail = std::exp(-p.beta_exp * p.s * xd);
  } else {
    const double z = -p.s * (1.0 - p.alpha) * xd;
    if (z <= -1.0) return 0.0;
    tail = std::exp(p.beta_exp / (1.0 - p.alpha) * std::log1p(z));
  }
  return std::pow(x, p.gamma - 1.0) * tail;
}

/// The stationary form [1 + c1* x^delta]^(1/(1-alpha)) of the one-moment
/// maximization before its sign is fixed. With c1* > 0 it grows without
/// bound, so it is only ever evaluated, never normalized.
inline double stationary_kernel(double alpha, double delta, double c1_star, double x) {
  if (alpha == 1.0) throw DomainError("stationary kernel requires alpha != 1");
  const double base = 1.0 + c1_star * std::pow(x, delta);
  if (base <= 0.0) return 0.0;
  return std::pow(base, 1.0 / (1.0 - alpha));
}

inline double log_normalizing_integral(const PathwayParams& p) {
  if (!is_normalizable(p)) {
    std::ostringstream os;
    os << "pathway kernel is not normalizable: beta/(alpha-1) = "
       << p.beta_exp / (p.alpha - 1.0) << " <= gamma/delta = " << p.gamma / p.delta;
    throw NotNormalizable(os.str());
  }
  const double g = p.gamma / p.delta;
  auto lbeta = [](double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  };
  if (p.alpha < 1.0) {
    return -std::log(p.delta) - g * std::log(p.s * (1.0 - p.alpha)) +
           lbeta(g, p.beta_exp / (1.0 - p.alpha) + 1.0);
  }
  if (p.alpha > 1.0) {
    return -std::log(p.delta) - g * std::log(p.s * (p.alpha - 1.0)) +
           lbeta(g, p.beta_exp / (p.alpha - 1.0) - g);
  }
  return -std::log(p.delta) - g * std::log(p.beta_exp * p.s) + std::lgamma(g);
}

/// Closed-form normalizing constant c.
inline double normalizing_constant(const PathwayParams& p) {
  return std::exp(-log_normalizing_integral(p));
}

/// c from direct quadrature of the kernel; the independent route used to
/// cross-check the closed form.
inline double normalizing_constant_by_quadrature(const PathwayParams& p,
                                                 const QuadratureSpec& tol = {}) {
  if (!is_normalizable(p)) throw NotNormalizable("pathway kernel is not normalizable");
  const auto sup = support(p);
  const double mass = integrate([&](double x) { return kernel(p, x); },
                                tol.over(sup.lower, sup.upper));
  return 1.0 / mass;
}

/// A normalized pathway density. Immutable after construction.
class Pathway {
public:
  explicit Pathway(const PathwayParams& params, const QuadratureSpec& tol = {})
      : params_(params), support_(support(params)), tol_(tol) {
    c_ = pathway::normalizing_constant(params_);
  }

  const PathwayParams& params() const noexcept { return params_; }
  SupportInterval support_interval() const noexcept { return support_; }
  double normalizing_constant() const noexcept { return c_; }
  Regime regime() const noexcept { return pathway::regime(params_); }

  double density(double x) const {
    if (!(x >= support_.lower) || x > support_.upper) return 0.0;
    return c_ * kernel(params_, x);
  }

  /// Integral of the density over [lo, hi] inside the support.
  double mass(double lo, double hi) const {
    lo = std::max(lo, support_.lower);
    hi = std::min(hi, support_.upper);
    if (!(lo < hi)) return 0.0;
    return integrate([this](double x) { return density(x); }, tol_.over(lo, hi));
  }

  double cdf(double x) const {
    if (!(x > support_.lower)) return 0.0;
    if (x >= support_.upper) return 1.0;
    return std::clamp(mass(support_.lower, x), 0.0, 1.0);
  }

  /// Smallest x with cdf(x) = u, by bracketing root-find on the cdf.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    if (u == 0.0) return support_.lower;
    if (u == 1.0) return support_.upper;
    double hi = support_.upper;
    if (std::isinf(hi)) {
      hi = scale();
      while (cdf(hi) < u) {
        hi *= 2.0;
        if (hi > 1e300) throw NonConvergence("quantile bracket expansion failed");
      }
    }
    return find_root([&](double x) { return cdf(x) - u; }, support_.lower, hi,
                     1e-13 * std::max(1.0, hi));
  }

  /// E[x^k] by quadrature.
  double raw_moment(double k) const {
    return integrate([&](double x) { return std::pow(x, k) * density(x); },
                     tol_.over(support_.lower, support_.upper));
  }

  /// Natural length scale s^(-1/delta), used to seed brackets and grids.
  double scale() const { return std::pow(params_.s, -1.0 / params_.delta); }

  DensitySpec as_density_spec() const {
    const Pathway copy = *this;
    return DensitySpec([copy](double x) { return copy.density(x); }, support_.lower,
                       support_.upper, false);
  }

  const QuadratureSpec& tolerance() const noexcept { return tol_; }

private:
  PathwayParams params_;
  SupportInterval support_;
  QuadratureSpec tol_;
  double c_ = 1.0;
};

/// Tabulated cdf on a fixed node set, so that many quantiles can be drawn
/// with short local root-finds instead of integrating from zero each time.
class QuantileTable {
public:
  explicit QuantileTable(const Pathway& dist, int nodes = 256) : dist_(dist) {
    if (nodes < 2) throw DomainError("quantile table needs at least two nodes");
    const auto sup = dist_.support_interval();
    xs_.reserve(static_cast<std::size_t>(nodes) + 1);
    if (std::isfinite(sup.upper)) {
      for (int i = 0; i <= nodes; ++i) {
        xs_.push_back(sup.lower + (sup.upper - sup.lower) * i / nodes);
      }
    } else {
      // v / (1 - v) spreads the nodes over the half-line at the natural scale.
      const double sc = dist_.scale();
      for (int i = 0; i < nodes; ++i) {
        const double v = static_cast<double>(i) / nodes;
        xs_.push_back(sup.lower + sc * v / (1.0 - v));
      }
      xs_.push_back(kInf);
    }
    cdfs_.assign(xs_.size(), 0.0);
    CompensatedSum acc;
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      if (std::isinf(xs_[i])) {
        cdfs_[i] = 1.0;
      } else {
        acc += dist_.mass(xs_[i - 1], xs_[i]);
        cdfs_[i] = std::min(acc.value(), 1.0);
      }
    }
    cdfs_.back() = 1.0;
  }

  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    if (u == 0.0) return xs_.front();
    if (u == 1.0) return xs_.back();
    const auto it = std::upper_bound(cdfs_.begin(), cdfs_.end(), u);
    std::size_t k = static_cast<std::size_t>(std::distance(cdfs_.begin(), it));
    k = std::clamp<std::size_t>(k, 1, cdfs_.size() - 1);
    const double lo = xs_[k - 1];
    const double base = cdfs_[k - 1];
    double hi = xs_[k];
    if (std::isinf(hi)) {
      hi = std::max(2.0 * lo, dist_.scale());
      while (base + dist_.mass(lo, hi) < u) {
        hi *= 2.0;
        if (hi > 1e300) throw NonConvergence("quantile bracket expansion failed");
      }
    }
    auto residual = [&](double x) { return base + dist_.mass(lo, x) - u; };
    if (residual(hi) < 0.0) return hi;  // table round-off at the bracket edge
    return find_root(residual, lo, hi, 1e-13 * std::max(1.0, hi));
  }

  std::span<const double> nodes() const noexcept { return xs_; }
  std::span<const double> cdf_values() const noexcept { return cdfs_; }

private:
  Pathway dist_;
  std::vector<double> xs_;
  std::vector<double> cdfs_;
};

inline double density(const PathwayParams& p, double x) { return Pathway(p).density(x); }
inline double cdf(const PathwayParams& p, double x) { return Pathway(p).cdf(x); }
inline double quantile(const PathwayParams& p, double u) { return Pathway(p).quantile(u); }

/// n inverse-cdf draws from a seeded 64-bit Mersenne Twister.
inline std::vector<double> sample(const PathwayParams& p, std::size_t n, std::uint64_t seed) {
  const Pathway dist(p);
  const QuantileTable table(dist);
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(table.quantile(open_unit_uniform(gen)));
  return out;
}

using NamedParams = std::map<std::string, double, std::less<>>;

/// Parameters realizing a named member of the family. Recognized names:
/// tsallis_q_exponential (alpha), type1_beta (alpha < 1), type2_beta
/// (alpha > 1), stretched_exponential, maxwell_boltzmann, gaussian_half,
/// weibull (shape), wigner (q in (1, 3), beta_scale). Unlisted parameters
/// default to gamma = delta = s = beta = 1.
inline PathwayParams special_case(std::string_view name, const NamedParams& named = {}) {
  auto get = [&](std::string_view key, double fallback) {
    const auto it = named.find(key);
    return it == named.end() ? fallback : it->second;
  };
  auto require = [&](std::string_view key) {
    const auto it = named.find(key);
    if (it == named.end()) {
      throw DomainError(std::string(name) + " requires parameter '" + std::string(key) + "'");
    }
    return it->second;
  };

  PathwayParams p;
  p.s = get("s", 1.0);
  p.beta_exp = get("beta", 1.0);
  if (name == "tsallis_q_exponential") {
    p.alpha = require("alpha");
    p.gamma = 1.0;
    p.delta = 1.0;
  } else if (name == "type1_beta") {
    p.alpha = require("alpha");
    if (!(p.alpha < 1.0)) throw DomainError("type1_beta requires alpha < 1");
    p.gamma = get("gamma", 1.0);
    p.delta = get("delta", 1.0);
  } else if (name == "type2_beta") {
    p.alpha = require("alpha");
    if (!(p.alpha > 1.0)) throw DomainError("type2_beta requires alpha > 1");
    p.gamma = get("gamma", 1.0);
    p.delta = get("delta", 1.0);
  } else if (name == "stretched_exponential") {
    p.alpha = 1.0;
    p.gamma = 1.0;
    p.delta = get("delta", 1.0);
  } else if (name == "maxwell_boltzmann") {
    p.alpha = 1.0;
    p.gamma = 3.0;
    p.delta = 2.0;
  } else if (name == "gaussian_half") {
    p.alpha = 1.0;
    p.gamma = 1.0;
    p.delta = 2.0;
  } else if (name == "weibull") {
    p.alpha = 1.0;
    p.delta = get("shape", get("delta", 1.0));
    p.gamma = p.delta;
  } else if (name == "wigner") {
    // The Wigner scale parameter plays the role of s; beta stays an exponent.
    const double q = require("q");
    if (!(q > 1.0 && q < 3.0)) throw DomainError("wigner requires 1 < q < 3");
    p.alpha = q;
    p.gamma = 1.0;
    p.delta = 2.0;
    p.s = get("beta_scale", 1.0);
  } else {
    throw UnknownName("unknown pathway special case '" + std::string(name) + "'");
  }
  p.validate();
  return p;
}

}  // namespace pathent::pathway
