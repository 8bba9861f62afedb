#pragma once

/**
 * @file discrete.hpp
 * @brief Entropies of order alpha for finite probability vectors.
 *
 * Families and their values on P = (p_1, ..., p_k), with D_x = sum p_i^x - 1:
 *
 *   shannon          -A sum p_i ln p_i
 *   renyi            ln(1 + D_alpha) / (1 - alpha)           alpha > 0
 *   havrda_charvat   D_alpha / (2^(1-alpha) - 1)              alpha > 0
 *   tsallis          D_alpha / (1 - alpha)                    alpha > 0
 *   mathai           D_(2-alpha) / (alpha - 1)                alpha < 2
 *   mathai_additive  ln(1 + D_(2-alpha)) / (alpha - 1)        alpha < 2
 *
 * alpha == 1 is the limiting Shannon value. Logarithms are natural; the
 * Shannon constant A rebases them.
 */

#include <pathent/error.hpp>
#include <pathent/numeric.hpp>

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pathent {

enum class Family { shannon, renyi, havrda_charvat, tsallis, mathai, mathai_additive };

inline constexpr Family kOrderFamilies[] = {Family::renyi, Family::havrda_charvat,
                                            Family::tsallis, Family::mathai,
                                            Family::mathai_additive};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::shannon: return "shannon";
    case Family::renyi: return "renyi";
    case Family::havrda_charvat: return "havrda-charvat";
    case Family::tsallis: return "tsallis";
    case Family::mathai: return "mathai";
    case Family::mathai_additive: return "mathai-additive";
  }
  return "unknown";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::shannon, Family::renyi, Family::havrda_charvat,
                   Family::tsallis, Family::mathai, Family::mathai_additive}) {
    if (name == family_name(f)) return f;
  }
  if (name == "havrda_charvat") return Family::havrda_charvat;
  if (name == "mathai_additive" || name == "mathai-star") return Family::mathai_additive;
  throw UnknownName("unknown entropy family '" + std::string(name) + "'");
}

struct EntropyFamily {
  Family tag = Family::shannon;
  double shannon_constant = 1.0;  // A; only the Shannon family uses it

  EntropyFamily() = default;
  EntropyFamily(Family f, double a = 1.0) : tag(f), shannon_constant(a) {  // NOLINT
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("Shannon constant A must be positive and finite");
    }
  }
};

/// Order alpha of a generalized entropy.
struct AlphaOrder {
  double value = 1.0;
  constexpr AlphaOrder() = default;
  constexpr explicit AlphaOrder(double a) : value(a) {}
};

/// Rejects orders outside the family's domain. alpha == 1 is always
/// admitted; it selects the limiting Shannon value.
inline void validate_order(Family family, AlphaOrder order) {
  const double a = order.value;
  if (!std::isfinite(a)) throw InvalidOrder("order alpha must be finite");
  switch (family) {
    case Family::shannon:
      return;
    case Family::renyi:
    case Family::havrda_charvat:
    case Family::tsallis:
      if (!(a > 0.0)) {
        throw InvalidOrder(std::string(family_name(family)) + " requires alpha > 0");
      }
      return;
    case Family::mathai:
    case Family::mathai_additive:
      if (!(a < 2.0)) {
        throw InvalidOrder(std::string(family_name(family)) + " requires alpha < 2");
      }
      return;
  }
}

enum class ZeroPolicy { strict_positive, zero_indifferent };

/// A validated probability vector. Sums within 1e-9 of one are renormalized;
/// anything further off is rejected.
class DiscreteDistribution {
public:
  explicit DiscreteDistribution(std::vector<double> probs,
                                ZeroPolicy policy = ZeroPolicy::zero_indifferent)
      : probs_(std::move(probs)), policy_(policy) {
    if (probs_.empty()) throw InvalidDistribution("distribution must have at least one cell");
    for (double p : probs_) {
      if (!std::isfinite(p) || p < 0.0) {
        throw InvalidDistribution("probabilities must be finite and nonnegative");
      }
      if (p == 0.0 && policy_ == ZeroPolicy::strict_positive) {
        throw InvalidDistribution("zero probability under strict_positive policy");
      }
    }
    const double total = compensated_sum(probs_);
    if (!(std::abs(total - 1.0) <= 1e-9)) {
      std::ostringstream os;
      os.precision(17);
      os << "probabilities sum to " << total << ", not 1";
      throw InvalidDistribution(os.str());
    }
    if (total != 1.0) {
      for (double& p : probs_) p /= total;
    }
  }

  static DiscreteDistribution uniform(std::size_t k) {
    if (k == 0) throw InvalidDistribution("uniform distribution needs k >= 1");
    return DiscreteDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  /// The joint distribution {p_i q_j} in row-major order.
  static DiscreteDistribution product(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q) {
    std::vector<double> joint;
    joint.reserve(p.size() * q.size());
    for (double pi : p.probs()) {
      for (double qj : q.probs()) joint.push_back(pi * qj);
    }
    const bool strict = p.policy() == ZeroPolicy::strict_positive &&
                        q.policy() == ZeroPolicy::strict_positive;
    return DiscreteDistribution(std::move(joint), strict ? ZeroPolicy::strict_positive
                                                         : ZeroPolicy::zero_indifferent);
  }

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  ZeroPolicy policy() const noexcept { return policy_; }
  double operator[](std::size_t i) const { return probs_[i]; }

private:
  std::vector<double> probs_;
  ZeroPolicy policy_;
};

namespace detail {

// -sum p ln p with 0 ln 0 = 0.
inline double shannon_nats(std::span<const double> p) {
  CompensatedSum acc;
  for (double v : p) {
    if (v > 0.0) acc += -v * std::log(v);
  }
  return acc.value();
}

// sum p_i^x - 1, written as sum p_i (p_i^(x-1) - 1) so that the cancellation
// against the unit total happens inside expm1 rather than after summation.
// Requires sum p_i = 1 and x > 0 (zero cells then contribute nothing).
inline double power_sum_minus_one(std::span<const double> p, double x) {
  CompensatedSum acc;
  for (double v : p) {
    if (v > 0.0) acc += v * std::expm1((x - 1.0) * std::log(v));
  }
  return acc.value();
}

// 2^(1-alpha) - 1
inline double havrda_charvat_denominator(double alpha) {
  return std::expm1((1.0 - alpha) * std::numbers::ln2);
}

// Maps the power-sum excess D (or the Shannon value at alpha == 1) to the
// family's entropy. Shared with the continuous analogues.
inline double family_value(const EntropyFamily& family, double alpha, double excess) {
  switch (family.tag) {
    case Family::shannon: return excess;
    case Family::renyi: return std::log1p(excess) / (1.0 - alpha);
    case Family::havrda_charvat: return excess / havrda_charvat_denominator(alpha);
    case Family::tsallis: return excess / (1.0 - alpha);
    case Family::mathai: return excess / (alpha - 1.0);
    case Family::mathai_additive: return std::log1p(excess) / (alpha - 1.0);
  }
  return 0.0;
}

// Exponent of the power sum for the family (alpha or 2 - alpha).
inline double power_exponent(Family family, double alpha) {
  return (family == Family::mathai || family == Family::mathai_additive) ? 2.0 - alpha
                                                                         : alpha;
}

// Limit of the family as alpha -> 1, as a multiple of -sum p ln p. The
// Havrda-Charvat normalization 2^(1-alpha) - 1 ~ (1-alpha) ln 2 leaves the
// Shannon value in bits.
inline double limit_scale(const EntropyFamily& family) {
  if (family.tag == Family::shannon) return family.shannon_constant;
  if (family.tag == Family::havrda_charvat) return 1.0 / std::numbers::ln2;
  return 1.0;
}

}  // namespace detail

inline double entropy(const DiscreteDistribution& p, const EntropyFamily& family,
                      AlphaOrder order = AlphaOrder{1.0}) {
  validate_order(family.tag, order);
  const double alpha = order.value;
  if (family.tag == Family::shannon || alpha == 1.0) {
    return detail::limit_scale(family) * detail::shannon_nats(p.probs());
  }
  const double excess =
      detail::power_sum_minus_one(p.probs(), detail::power_exponent(family.tag, alpha));
  return detail::family_value(family, alpha, excess);
}

/// The coefficient a(alpha) in F(P,Q) = F(P) + F(Q) + a F(P) F(Q).
inline double composition_coefficient(const EntropyFamily& family, AlphaOrder order) {
  validate_order(family.tag, order);
  const double alpha = order.value;
  switch (family.tag) {
    case Family::shannon:
    case Family::renyi:
    case Family::mathai_additive:
      return 0.0;
    case Family::havrda_charvat:
      return detail::havrda_charvat_denominator(alpha);
    case Family::tsallis:
      return 1.0 - alpha;
    case Family::mathai:
      return alpha - 1.0;
  }
  return 0.0;
}

inline double joint_entropy_product(const DiscreteDistribution& p,
                                    const DiscreteDistribution& q,
                                    const EntropyFamily& family, AlphaOrder order) {
  return entropy(DiscreteDistribution::product(p, q), family, order);
}

inline double composition_residual_bivariate(const DiscreteDistribution& p,
                                             const DiscreteDistribution& q,
                                             const EntropyFamily& family,
                                             AlphaOrder order) {
  const double a = composition_coefficient(family, order);
  const double fp = entropy(p, family, order);
  const double fq = entropy(q, family, order);
  const double joint = joint_entropy_product(p, q, family, order);
  return joint - (fp + fq + a * fp * fq);
}

inline double composition_residual_trivariate(const DiscreteDistribution& p,
                                              const DiscreteDistribution& q,
                                              const DiscreteDistribution& r,
                                              const EntropyFamily& family,
                                              AlphaOrder order) {
  const double a = composition_coefficient(family, order);
  const double fp = entropy(p, family, order);
  const double fq = entropy(q, family, order);
  const double fr = entropy(r, family, order);
  const auto joint = DiscreteDistribution::product(DiscreteDistribution::product(p, q), r);
  const double lhs = entropy(joint, family, order);
  const double rhs =
      fp + fq + fr + a * (fp * fq + fp * fr + fq * fr) + a * a * fp * fq * fr;
  return lhs - rhs;
}

/// Weight b_alpha(x) of the two-cell recursion f(x) + b(x) f(y/(1-x)).
/// Rényi and the additive Mathai form have no weight of this kind.
inline double recursivity_weight(const EntropyFamily& family, AlphaOrder order, double x) {
  validate_order(family.tag, order);
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("recursivity weight needs 0 <= x < 1");
  const double alpha = order.value;
  switch (family.tag) {
    case Family::shannon: return 1.0 - x;
    case Family::havrda_charvat:
    case Family::tsallis: return std::pow(1.0 - x, alpha);
    case Family::mathai: return std::pow(1.0 - x, 2.0 - alpha);
    case Family::renyi:
    case Family::mathai_additive:
      break;
  }
  throw UnsupportedFamily(std::string(family_name(family.tag)) +
                          " has no recursivity weight");
}

/// f_alpha(x) = H_2(x, 1 - x).
inline double binary_entropy(const EntropyFamily& family, AlphaOrder order, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy needs 0 <= x <= 1");
  const double cells[2] = {x, 1.0 - x};
  validate_order(family.tag, order);
  const double alpha = order.value;
  if (family.tag == Family::shannon || alpha == 1.0) {
    return detail::limit_scale(family) * detail::shannon_nats(cells);
  }
  return detail::family_value(
      family, alpha, detail::power_sum_minus_one(cells, detail::power_exponent(family.tag, alpha)));
}

/// Which weight multiplies f(x/(1-y)) on the right-hand side of the
/// functional equation. `at_y` is the symmetric form that the recursive
/// entropies satisfy; `at_x` reuses b(x) on both sides.
enum class RightWeight { at_y, at_x };

/// f(x) + b(x) f(y/(1-x)) - f(y) - b(.) f(x/(1-y)) for x, y >= 0, x + y <= 1.
inline double functional_equation_residual(const EntropyFamily& family, AlphaOrder order,
                                           double x, double y,
                                           RightWeight weight = RightWeight::at_y) {
  if (!(x >= 0.0 && y >= 0.0 && x < 1.0 && y < 1.0 && x + y <= 1.0)) {
    throw DomainError("functional equation needs x, y in [0, 1) with x + y <= 1");
  }
  const double bx = recursivity_weight(family, order, x);
  const double by = recursivity_weight(family, order, y);
  const double right_weight = weight == RightWeight::at_y ? by : bx;
  const double lhs = binary_entropy(family, order, x) +
                     bx * binary_entropy(family, order, std::min(1.0, y / (1.0 - x)));
  const double rhs = binary_entropy(family, order, y) +
                     right_weight * binary_entropy(family, order, std::min(1.0, x / (1.0 - y)));
  return lhs - rhs;
}

/// H_n(p_1..p_{m-1}, p_m q_1..p_m q_r) - H_m(P) - p_m H_r(Q), Shannon with A = 1.
inline double shannon_recursivity_residual(const DiscreteDistribution& p,
                                           const DiscreteDistribution& q) {
  std::vector<double> split(p.probs().begin(), p.probs().end() - 1);
  const double pm = p.probs().back();
  for (double qj : q.probs()) split.push_back(pm * qj);
  const DiscreteDistribution refined(std::move(split));
  const EntropyFamily shannon(Family::shannon);
  return entropy(refined, shannon) - entropy(p, shannon) - pm * entropy(q, shannon);
}

}  // namespace pathent
