#pragma once

/**
 * @file maxent.hpp
 * @brief Gridded maximization of M_alpha(f) under moment constraints.
 *
 * Stationarity of (integral f^(2-alpha) - 1)/(alpha - 1) under the linear
 * constraints  integral w_j(x) f(x) dx = b_j  (w_0 = 1 is always present)
 * gives the Euler form
 *
 *     (2 - alpha) f^(1-alpha) = sum_j lambda_j w_j(x).
 *
 * For alpha < 1 the exponent 1/(1-alpha) is positive and f is cut to zero
 * where the right side is not positive (bounded support); for 1 < alpha < 2
 * it is negative and the right side must stay positive everywhere.
 *
 * Rather than optimizing over the N grid values, `solve` parameterizes f by
 * the multipliers and runs a damped Newton iteration on the constraint
 * residual. That iteration is the dual of the original problem: the merit
 *
 *     G(lambda) = |1-alpha|/(2-alpha) sum_i c_i z_i f_i  -/+  lambda . b
 *
 * (c_i cell weights, z_i = sum_j lambda_j w_j(x_i)) is convex, its gradient
 * is +/- the constraint residual, and the line search runs on it.
 */

#include <pathent/discrete.hpp>
#include <pathent/error.hpp>
#include <pathent/numeric.hpp>
#include <pathent/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

namespace pathent::maxent {

enum class Variant { plain, escort };

struct MomentConstraint {
  double exponent = 1.0;  // constrains the integral of x^exponent f(x)
  double target = 0.0;
};

struct MaxEntProblem {
  std::vector<double> grid;
  AlphaOrder order{0.5};
  std::vector<MomentConstraint> constraints;
  Variant variant = Variant::plain;
};

struct MaxEntSolution {
  std::vector<double> density_values;
  // plain: (lambda_0, lambda_1, ...) with lambda_0 paired with normalization.
  // escort: (normalizer lambda_1*, lambda_3).
  std::vector<double> multipliers;
  double objective = 0.0;
  double euler_residual = 0.0;
  int iterations = 0;
};

/// Composite Simpson weights for an arbitrary strictly increasing grid:
/// pairs of cells are integrated through the quadratic interpolant; with an
/// odd number of cells the last one uses the quadratic through its last
/// three nodes. Exact for quadratics on any grid.
inline std::vector<double> cell_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw Infeasible("grid needs at least three points");
  std::vector<double> w(n, 0.0);
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h1 = x[i + 1] - x[i];
    const double h2 = x[i + 2] - x[i + 1];
    const double h = h1 + h2;
    w[i] += h / 6.0 * (2.0 - h2 / h1);
    w[i + 1] += h * h * h / (6.0 * h1 * h2);
    w[i + 2] += h / 6.0 * (2.0 - h1 / h2);
  }
  if (i + 1 < n) {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    w[n - 3] += -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
    w[n - 2] += h2 * (h2 + 3.0 * h1) / (6.0 * h1);
    w[n - 1] += h2 * (2.0 * h2 + 3.0 * h1) / (6.0 * (h1 + h2));
  }
  return w;
}

namespace detail {

inline void validate_grid(std::span<const double> grid) {
  if (grid.size() < 3) throw Infeasible("grid needs at least three points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError("grid points must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("grid must be strictly increasing");
    }
  }
}

inline void validate_order(AlphaOrder order) {
  pathent::validate_order(Family::mathai, order);
  if (order.value == 1.0) throw InvalidOrder("maximum-entropy solver requires alpha != 1");
}

// Solves the small dense system a x = b in place by partial pivoting.
// Returns false when the matrix is numerically singular.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (!(std::abs(a[piv][col]) > 0.0) || !std::isfinite(a[piv][col])) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double acc = b[col];
    for (std::size_t c = col + 1; c < n; ++c) acc -= a[col][c] * b[c];
    b[col] = acc / a[col][col];
  }
  return std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); });
}

// Basis functions (rows) evaluated on the grid: row 0 is normalization.
inline std::vector<std::vector<double>> basis(const MaxEntProblem& problem) {
  std::vector<std::vector<double>> phi;
  phi.emplace_back(problem.grid.size(), 1.0);
  for (const auto& c : problem.constraints) {
    if (!std::isfinite(c.exponent) || !std::isfinite(c.target)) {
      throw DomainError("moment constraints must be finite");
    }
    if (c.exponent == 0.0) continue;
    std::vector<double> row;
    row.reserve(problem.grid.size());
    for (double x : problem.grid) {
      const double v = std::pow(x, c.exponent);
      if (!std::isfinite(v)) {
        throw DomainError("moment weight x^exponent is not finite on the grid");
      }
      row.push_back(v);
    }
    phi.push_back(std::move(row));
  }
  return phi;
}

inline std::vector<double> targets(const MaxEntProblem& problem) {
  std::vector<double> b{1.0};
  for (const auto& c : problem.constraints) {
    if (c.exponent == 0.0) {
      if (std::abs(c.target - 1.0) > 1e-12) {
        throw Infeasible("a density must integrate to one");
      }
      continue;
    }
    b.push_back(c.target);
  }
  return b;
}

}  // namespace detail

/// Discretized M_alpha(f) = (sum c_i f_i^(2-alpha) - 1) / (alpha - 1).
inline double objective(std::span<const double> density, std::span<const double> weights,
                        AlphaOrder order) {
  const double alpha = order.value;
  CompensatedSum acc;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (density[i] > 0.0) acc += weights[i] * std::pow(density[i], 2.0 - alpha);
  }
  return (acc.value() - 1.0) / (alpha - 1.0);
}

/// Max over positive cells of |(2-alpha) f^(1-alpha) - sum lambda_j w_j(x)|,
/// relative to the largest term magnitude. For the escort variant the
/// stationarity condition alpha f^(alpha-1) (1 + lambda_3 x^delta) = const is
/// checked instead.
inline double euler_residual(std::span<const double> density, const MaxEntProblem& problem,
                             std::span<const double> multipliers) {
  const double alpha = problem.order.value;
  double worst = 0.0;
  double scale = 0.0;
  if (problem.variant == Variant::escort) {
    if (multipliers.size() != 2 || problem.constraints.size() != 1) {
      throw DomainError("escort residual needs (normalizer, lambda_3)");
    }
    const double delta = problem.constraints.front().exponent;
    const double level = alpha * std::pow(multipliers[0], alpha - 1.0);
    for (std::size_t i = 0; i < density.size(); ++i) {
      if (!(density[i] > 0.0)) continue;
      const double v = alpha * std::pow(density[i], alpha - 1.0) *
                       (1.0 + multipliers[1] * std::pow(problem.grid[i], delta));
      worst = std::max(worst, std::abs(v - level));
      scale = std::max({scale, std::abs(v), std::abs(level)});
    }
    return scale > 0.0 ? worst / scale : 0.0;
  }
  const auto phi = detail::basis(problem);
  if (multipliers.size() != phi.size()) {
    throw DomainError("multiplier count does not match the constraint set");
  }
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(density[i] > 0.0)) continue;
    const double lhs = (2.0 - alpha) * std::pow(density[i], 1.0 - alpha);
    CompensatedSum rhs;
    for (std::size_t j = 0; j < phi.size(); ++j) rhs += multipliers[j] * phi[j][i];
    worst = std::max(worst, std::abs(lhs - rhs.value()));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs.value())});
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

inline MaxEntSolution solve_escort(const MaxEntProblem& problem);

/// Solves the plain problem (or dispatches to `solve_escort`).
inline MaxEntSolution solve(const MaxEntProblem& problem) {
  detail::validate_grid(problem.grid);
  detail::validate_order(problem.order);
  if (problem.variant == Variant::escort) return solve_escort(problem);

  const double alpha = problem.order.value;
  const double p = 2.0 - alpha;
  const double r = 1.0 / (1.0 - alpha);
  const bool bounded = alpha < 1.0;  // f may vanish; otherwise z > 0 required
  const auto w = cell_weights(problem.grid);
  const auto phi = detail::basis(problem);
  const auto b = detail::targets(problem);
  const std::size_t k = phi.size();
  const std::size_t n = problem.grid.size();

  // A single moment is feasible only strictly inside the range of its weight.
  if (k == 2) {
    const auto [lo, hi] = std::minmax_element(phi[1].begin(), phi[1].end());
    if (!(b[1] > *lo && b[1] < *hi)) {
      throw Infeasible("moment target lies outside the range attainable on the grid");
    }
  }

  struct State {
    std::vector<double> f;
    std::vector<double> residual;
    double merit = 0.0;
    bool valid = true;
  };

  auto evaluate = [&](const std::vector<double>& mu) {
    State st;
    st.f.assign(n, 0.0);
    CompensatedSum zf;
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum z;
      for (std::size_t j = 0; j < k; ++j) z += mu[j] * phi[j][i];
      const double zi = z.value();
      if (zi > 0.0) {
        st.f[i] = std::pow(zi / p, r);
      } else if (!bounded) {
        st.valid = false;
        return st;
      }
      if (!std::isfinite(st.f[i])) {
        st.valid = false;
        return st;
      }
      zf += w[i] * zi * st.f[i];
    }
    st.residual.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      CompensatedSum acc;
      for (std::size_t i = 0; i < n; ++i) acc += w[i] * phi[j][i] * st.f[i];
      st.residual[j] = acc.value() - b[j];
    }
    CompensatedSum mub;
    for (std::size_t j = 0; j < k; ++j) mub += mu[j] * b[j];
    const double sign = bounded ? 1.0 : -1.0;
    st.merit = std::abs(1.0 - alpha) / p * zf.value() - sign * mub.value();
    return st;
  };

  auto residual_norm = [&](const State& st) {
    double m = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      m = std::max(m, std::abs(st.residual[j]) / std::max(1.0, std::abs(b[j])));
    }
    return m;
  };

  const double length = compensated_sum(w);
  std::vector<double> mu(k, 0.0);
  mu[0] = p * std::pow(1.0 / length, 1.0 - alpha);
  State cur = evaluate(mu);
  if (!cur.valid) throw NonConvergence("maximum-entropy start point is invalid");

  constexpr int kMaxIterations = 200;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    if (residual_norm(cur) <= 1e-13) break;

    std::vector<std::vector<double>> jac(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      if (!(cur.f[i] > 0.0)) continue;
      const double d = w[i] * (r / p) * std::pow(cur.f[i], alpha);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = 0; c < k; ++c) jac[a][c] += d * phi[a][i] * phi[c][i];
      }
    }
    std::vector<double> step(k);
    for (std::size_t j = 0; j < k; ++j) step[j] = -cur.residual[j];
    if (!detail::solve_dense(jac, step)) {
      double trace = 0.0;
      for (std::size_t j = 0; j < k; ++j) trace += std::abs(jac[j][j]);
      for (std::size_t j = 0; j < k; ++j) jac[j][j] += 1e-10 * std::max(trace, 1e-300);
      for (std::size_t j = 0; j < k; ++j) step[j] = -cur.residual[j];
      if (!detail::solve_dense(jac, step)) {
        throw NonConvergence("maximum-entropy Newton system is singular");
      }
    }

    // gradient of the merit is sign * residual
    const double sign = bounded ? 1.0 : -1.0;
    double slope = 0.0;
    for (std::size_t j = 0; j < k; ++j) slope += sign * cur.residual[j] * step[j];

    double t = 1.0;
    bool accepted = false;
    State trial;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      std::vector<double> cand(k);
      for (std::size_t j = 0; j < k; ++j) cand[j] = mu[j] + t * step[j];
      trial = evaluate(cand);
      if (!trial.valid) continue;
      const double allowance = 1e-4 * t * std::min(slope, 0.0) + 1e-14 * std::abs(cur.merit);
      if (trial.merit <= cur.merit + allowance ||
          residual_norm(trial) < 0.5 * residual_norm(cur)) {
        mu = std::move(cand);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (residual_norm(cur) <= 1e-10) break;
      throw NonConvergence("maximum-entropy line search stalled");
    }
    cur = std::move(trial);
    double mu_norm = 0.0;
    for (double m : mu) mu_norm = std::max(mu_norm, std::abs(m));
    if (!(mu_norm < 1e200)) throw Infeasible("multipliers diverge; constraints are infeasible");
  }
  if (residual_norm(cur) > 1e-10) {
    std::ostringstream os;
    os << "maximum-entropy iteration did not converge (residual " << residual_norm(cur) << ")";
    throw NonConvergence(os.str());
  }

  MaxEntSolution sol;
  sol.density_values = std::move(cur.f);
  sol.multipliers = mu;
  sol.objective = objective(sol.density_values, w, problem.order);
  sol.euler_residual = euler_residual(sol.density_values, problem, sol.multipliers);
  sol.iterations = iter;
  return sol;
}

/// Maximizes the discretized integral of f^alpha subject to normalization and
/// a fixed escort expectation of x^delta under mu f^alpha, where the single
/// constraint carries delta as its exponent and the expectation as target.
/// The stationary family is f = lambda_1* [1 + lambda_3 x^delta]^(-1/(alpha-1)),
/// so only lambda_3 is searched for.
inline MaxEntSolution solve_escort(const MaxEntProblem& problem) {
  detail::validate_grid(problem.grid);
  detail::validate_order(problem.order);
  if (problem.constraints.size() != 1) {
    throw DomainError("escort problem takes exactly one escort-moment constraint");
  }
  const double alpha = problem.order.value;
  const double delta = problem.constraints.front().exponent;
  const double target = problem.constraints.front().target;
  if (!(delta > 0.0) || !std::isfinite(target)) {
    throw DomainError("escort constraint needs delta > 0 and a finite target");
  }
  if (problem.grid.front() < 0.0) throw DomainError("escort grid must be nonnegative");

  const auto w = cell_weights(problem.grid);
  const std::size_t n = problem.grid.size();
  std::vector<double> xd(n);
  for (std::size_t i = 0; i < n; ++i) xd[i] = std::pow(problem.grid[i], delta);
  const double xd_max = xd.back();
  if (!(target > xd.front() && target < xd_max)) {
    throw Infeasible("escort target lies outside the range attainable on the grid");
  }
  const double expo = -1.0 / (alpha - 1.0);

  auto shape = [&](double lambda3) {
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double base = 1.0 + lambda3 * xd[i];
      if (base > 0.0) g[i] = std::pow(base, expo);
    }
    return g;
  };
  auto escort_gap = [&](double lambda3) {
    const auto g = shape(lambda3);
    CompensatedSum num;
    CompensatedSum den;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(g[i] > 0.0)) continue;
      const double ga = std::pow(g[i], alpha);
      num += w[i] * xd[i] * ga;
      den += w[i] * ga;
    }
    return num.value() / den.value() - target;
  };

  // Ordered candidate values of lambda_3; the escort mean is monotone in it.
  std::vector<double> cands;
  if (alpha > 1.0) {
    const double pole = -1.0 / xd_max;
    for (int e = 1; e <= 52; ++e) cands.push_back(pole * (1.0 - std::ldexp(1.0, -e)));
  } else {
    for (int e = 60; e >= -20; --e) cands.push_back(-std::ldexp(1.0, e));
  }
  cands.push_back(0.0);
  for (int e = -20; e <= 60; ++e) cands.push_back(std::ldexp(1.0, e));
  std::sort(cands.begin(), cands.end());

  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  double prev_x = cands.front();
  double prev_g = escort_gap(prev_x);
  for (std::size_t i = 1; i < cands.size() && !bracketed; ++i) {
    const double gx = escort_gap(cands[i]);
    if (!std::isfinite(gx) || !std::isfinite(prev_g)) {
      prev_x = cands[i];
      prev_g = gx;
      continue;
    }
    if ((prev_g <= 0.0) != (gx <= 0.0) || gx == 0.0) {
      lo = prev_x;
      hi = cands[i];
      bracketed = true;
    }
    prev_x = cands[i];
    prev_g = gx;
  }
  if (!bracketed) throw Infeasible("no escort multiplier reproduces the target");

  const double lambda3 =
      find_root(escort_gap, lo, hi, 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)}));
  auto g = shape(lambda3);
  CompensatedSum mass;
  for (std::size_t i = 0; i < n; ++i) mass += w[i] * g[i];
  const double norm = 1.0 / mass.value();
  for (double& v : g) v *= norm;

  MaxEntSolution sol;
  sol.density_values = std::move(g);
  sol.multipliers = {norm, lambda3};
  CompensatedSum obj;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.density_values[i] > 0.0) obj += w[i] * std::pow(sol.density_values[i], alpha);
  }
  sol.objective = obj.value();
  sol.euler_residual = euler_residual(sol.density_values, problem, sol.multipliers);
  return sol;
}

}  // namespace pathent::maxent
