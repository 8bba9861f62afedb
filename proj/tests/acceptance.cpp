// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <pathent/cli.hpp>
#include <pathent/pathent.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace pathent;
namespace ts = testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr Family kFive[] = {Family::renyi, Family::havrda_charvat, Family::tsallis,
                            Family::mathai, Family::mathai_additive};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  x.back() = b;
  return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

Result composition_laws() {
  Result r;
  const auto t0 = Clock::now();
  auto gen = ts::rng(1001);
  double worst2 = 0.0;
  double worst3 = 0.0;
  for (Family f : kFive) {
    for (int i = 0; i < 1000; ++i) {
      const auto p = ts::random_distribution(gen, 2, 6);
      const auto q = ts::random_distribution(gen, 2, 6);
      const AlphaOrder a{ts::random_order(gen, f)};
      worst2 = std::max(worst2, std::abs(composition_residual_bivariate(p, q, f, a)));
    }
    for (int i = 0; i < 200; ++i) {
      const auto p = ts::random_distribution(gen, 2, 6);
      const auto q = ts::random_distribution(gen, 2, 6);
      const auto s = ts::random_distribution(gen, 2, 6);
      const AlphaOrder a{ts::random_order(gen, f)};
      worst3 = std::max(worst3, std::abs(composition_residual_trivariate(p, q, s, f, a)));
    }
  }
  const double t = seconds_since(t0);
  r.require(worst2 <= 1e-12, fmt("bivariate %.3g > 1e-12", worst2));
  r.require(worst3 <= 1e-10, fmt("trivariate %.3g > 1e-10", worst3));
  r.require(t < 10.0, fmt("runtime %.2f s", t));
  r.detail = fmt("max bivariate %.3g, max trivariate %.3g, %.2f s", worst2, worst3, t) +
             (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

Result coefficient_table() {
  Result r;
  for (double alpha : {0.5, 1.5, 1.9}) {
    const std::pair<Family, double> expected[] = {
        {Family::shannon, 0.0},
        {Family::renyi, 0.0},
        {Family::mathai_additive, 0.0},
        {Family::havrda_charvat, std::pow(2.0, 1.0 - alpha) - 1.0},
        {Family::tsallis, 1.0 - alpha},
        {Family::mathai, alpha - 1.0},
    };
    for (const auto& [f, want] : expected) {
      const double got = composition_coefficient(f, AlphaOrder{alpha});
      r.require(std::abs(got - want) <= 1e-15 * std::max(1.0, std::abs(want)),
                fmt("%s(%g) = %.17g, want %.17g", std::string(family_name(f)).c_str(), alpha, got,
                    want));
    }
  }
  const double hc = composition_coefficient(Family::havrda_charvat, AlphaOrder{0.5});
  r.require(std::abs(hc - (std::numbers::sqrt2 - 1.0)) <= 1e-14, fmt("HC(0.5) = %.17g", hc));
  if (r.pass) r.detail = fmt("18 entries exact; HC(0.5) = %.17g", hc);
  return r;
}

Result limit_law() {
  Result r;
  auto gen = ts::rng(1003);
  std::vector<DiscreteDistribution> dists;
  for (int i = 0; i < 20; ++i) dists.push_back(ts::random_distribution(gen, 2, 8));
  std::string summary;
  for (Family f : kFive) {
    double worst_small = 0.0;
    int not_improving = 0;
    for (const auto& p : dists) {
      const double shannon = entropy(p, Family::shannon);
      auto err = [&](double h) {
        double m = 0.0;
        for (double sign : {1.0, -1.0}) {
          m = std::max(m, std::abs(entropy(p, f, AlphaOrder{1.0 + sign * h}) - shannon));
        }
        return m;
      };
      const double small = err(1e-4);
      worst_small = std::max(worst_small, small);
      if (!(small < err(1e-2))) ++not_improving;
    }
    const std::string name(family_name(f));
    r.require(worst_small <= 1e-3, fmt("%s error %.3g at h=1e-4", name.c_str(), worst_small));
    r.require(not_improving == 0, fmt("%s error not shrinking for %d of 20", name.c_str(), not_improving));
    if (!summary.empty()) summary += ", ";
    summary += fmt("%s %.2g", name.c_str(), worst_small);
  }
  r.detail = "max |H(1+-1e-4) - S|: " + summary + (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

Result shannon_uniform() {
  Result r;
  double worst = 0.0;
  for (double A : {1.0, 1.0 / std::numbers::ln2}) {
    for (int k = 2; k <= 10; ++k) {
      const DiscreteDistribution u(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
      const double got = entropy(u, EntropyFamily(Family::shannon, A));
      worst = std::max(worst, std::abs(got - A * std::log(static_cast<double>(k))));
    }
  }
  r.require(worst <= 1e-14, fmt("error %.3g > 1e-14", worst));
  if (r.pass) r.detail = fmt("max error %.3g", worst);
  return r;
}

Result pathway_normalization() {
  Result r;
  auto gen = ts::rng(1005);
  double worst_mass = 0.0;
  double worst_c = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto params = ts::random_pathway(gen, i % 3 - 1);
    const pathway::Pathway d(params);
    const auto sup = d.support_interval();
    const double mass = integrate([&](double x) { return d.density(x); },
                                  QuadratureSpec{}.over(sup.lower, sup.upper));
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    const double cq = pathway::normalizing_constant_by_quadrature(params);
    worst_c = std::max(worst_c, std::abs(d.normalizing_constant() - cq) / cq);
  }
  const double hand = pathway::normalizing_constant({0.5, 1.0, 1.0, 1.0, 1.0});
  r.require(worst_mass <= 1e-7, fmt("|mass - 1| %.3g", worst_mass));
  r.require(worst_c <= 1e-8, fmt("closed-form vs quadrature c %.3g", worst_c));
  r.require(std::abs(hand - 1.5) <= 1e-12, fmt("hand case c = %.17g", hand));
  r.detail = fmt("max |mass-1| %.3g, max rel c %.3g, hand c = %.17g", worst_mass, worst_c, hand) +
             (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

Result pathway_limit() {
  Result r;
  const double steps[] = {1e-1, 1e-2, 1e-3};
  double worst_last = 0.0;
  for (double x : {0.1, 0.5, 1.0}) {
    const double at_one = pathway::density({1.0, 2.0, 1.0, 1.0, 1.0}, x);
    for (double sign : {1.0, -1.0}) {
      double prev = INFINITY;
      for (double h : steps) {
        const double e = std::abs(pathway::density({1.0 + sign * h, 2.0, 1.0, 1.0, 1.0}, x) - at_one);
        r.require(e < prev, fmt("x=%g alpha=%g: error %.3g not below previous", x, 1.0 + sign * h, e));
        prev = e;
      }
      worst_last = std::max(worst_last, prev);
    }
  }
  r.require(worst_last <= 1e-2, fmt("error at 1+-1e-3 is %.3g", worst_last));
  if (r.pass) r.detail = fmt("max error at 1+-1e-3 %.3g, monotone over 1+-{1e-1,1e-2,1e-3}", worst_last);
  return r;
}

Result ode_suite() {
  using namespace pathent::ode;
  Result r;
  const double h = 1e-5;
  auto gen = ts::rng(1007);
  double worst_general = 0.0;
  for (int i = 0; i < 20; ++i) {
    const OdeCase c(ts::random_pathway(gen, i % 3 - 1), Reduction::general);
    worst_general = std::max(worst_general, residual_sweep(c, 20, h).max_residual);
  }
  const double beta1 =
      residual_sweep(OdeCase({1.5, 3.0, 1.0, 1.0, 1.0}, Reduction::reduced_beta1), 20, h).max_residual;
  const OdeCase eta_case({1.5, 1.0, 1.0, 1.0, 2.0}, Reduction::tsallis_eta);
  const double eta = residual_sweep(eta_case, 20, h).max_residual;
  const double power =
      residual_sweep(OdeCase({2.0, 1.0, 1.0, 1.0, 1.0}, Reduction::tsallis_alpha), 20, h).max_residual;
  r.require(worst_general <= 1e-7, fmt("general %.3g", worst_general));
  r.require(beta1 <= 1e-7, fmt("reduced-beta1 %.3g", beta1));
  r.require(std::abs(eta_case.eta() - 1.25) < 1e-15, fmt("eta = %g", eta_case.eta()));
  r.require(eta <= 1e-7, fmt("tsallis-eta %.3g", eta));
  r.require(power <= 1e-7, fmt("tsallis-alpha %.3g", power));

  // Stencil order: each tenfold step reduction cuts the residual ~100x until
  // it reaches the rounding floor.
  const OdeCase probe({1.3, 2.0, 1.5, 0.8, 1.2}, Reduction::general);
  const double x = 0.7;
  const double floor = 1e-10 * std::max(std::abs(evaluate(probe, x, h).lhs), 1.0);
  std::vector<double> res;
  for (double step : {1e-2, 1e-3, 1e-4}) res.push_back(residual(probe, x, step));
  for (std::size_t i = 1; i < res.size(); ++i) {
    if (res[i] > floor) {
      r.require(res[i - 1] / res[i] >= 50.0, fmt("stencil ratio %.3g", res[i - 1] / res[i]));
    }
  }
  r.detail = fmt("general %.2g, reduced-beta1 %.2g, tsallis-eta %.2g, tsallis-alpha %.2g; "
                 "h-ladder %.2g/%.2g/%.2g",
                 worst_general, beta1, eta, power, res[0], res[1], res[2]) +
             (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

double moment(const pathway::Pathway& d, double k, double upper) {
  return integrate([&](double x) { return std::pow(x, k) * d.density(x); },
                   QuadratureSpec{}.over(0.0, upper));
}

Result maxent_round_trips() {
  using namespace pathent::maxent;
  Result r;
  double slowest = 0.0;
  auto timed = [&](const MaxEntProblem& pr) {
    const auto t0 = Clock::now();
    auto sol = solve(pr);
    slowest = std::max(slowest, seconds_since(t0));
    return sol;
  };
  auto against = [](const MaxEntProblem& pr, const std::function<double(double)>& f) {
    std::vector<double> v;
    for (double x : pr.grid) v.push_back(f(x));
    return v;
  };

  double uniform_err = 0.0;
  for (double alpha : {0.5, 1.5}) {
    const MaxEntProblem pr{linspace(0.0, 1.0, 200), AlphaOrder{alpha}, {}, Variant::plain};
    for (double v : timed(pr).density_values) uniform_err = std::max(uniform_err, std::abs(v - 1.0));
  }

  // x^delta constraint: type-1 beta with gamma = 1
  const pathway::Pathway one({0.5, 1.0, 1.0, 1.0, 1.0});
  const MaxEntProblem single{linspace(0.0, 2.0, 200), AlphaOrder{0.5},
                             {{1.0, moment(one, 1.0, 2.0)}}, Variant::plain};
  const double single_err = max_abs_diff(timed(single).density_values,
                                         against(single, [&](double x) { return one.density(x); }));

  // gamma != 1 needs two moments; the grid is graded toward the origin where
  // the density behaves like x^(gamma-1).
  const pathway::Pathway two({0.5, 2.0, 1.0, 1.0, 1.0});
  std::vector<double> graded(200);
  for (int i = 0; i < 200; ++i) {
    const double t = i / 199.0;
    graded[static_cast<std::size_t>(i)] = 2.0 * t * t;
  }
  const MaxEntProblem pair{graded, AlphaOrder{0.5},
                           {{0.5, moment(two, 0.5, 2.0)}, {1.5, moment(two, 1.5, 2.0)}},
                           Variant::plain};
  const double pair_err = max_abs_diff(timed(pair).density_values,
                                       against(pair, [&](double x) { return two.density(x); }));

  // Escort constraint on [0, L]: the solution is c (1 + lambda3 x)^(-1/(alpha-1)).
  const double alpha = 1.5;
  const double lambda3 = 0.5;
  const double L = 5.0;
  auto kernel = [&](double x) { return std::pow(1.0 + lambda3 * x, -1.0 / (alpha - 1.0)); };
  const auto tol = QuadratureSpec{}.over(0.0, L);
  const double num = integrate([&](double x) { return x * std::pow(kernel(x), alpha); }, tol);
  const double den = integrate([&](double x) { return std::pow(kernel(x), alpha); }, tol);
  const MaxEntProblem escort{linspace(0.0, L, 200), AlphaOrder{alpha}, {{1.0, num / den}},
                             Variant::escort};
  const double c = 1.0 / integrate(kernel, tol);
  const double escort_err = max_abs_diff(timed(escort).density_values,
                                         against(escort, [&](double x) { return c * kernel(x); }));

  r.require(uniform_err <= 1e-10, fmt("uniform %.3g", uniform_err));
  r.require(single_err <= 1e-6, fmt("delta-moment %.3g", single_err));
  r.require(pair_err <= 1e-6, fmt("two-moment %.3g", pair_err));
  r.require(escort_err <= 1e-6, fmt("escort %.3g", escort_err));
  r.require(slowest < 5.0, fmt("slowest solve %.2f s", slowest));
  r.detail = fmt("uniform %.2g, delta-moment %.2g, two-moment %.2g, escort %.2g; slowest %.3f s",
                 uniform_err, single_err, pair_err, escort_err, slowest) +
             (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Result ppp_suite() {
  Result r;
  const auto t0 = Clock::now();
  for (std::int64_t n : {3, 5, 7}) r.require(!ppp::has_independent_events(n), fmt("n=%d nonempty", int(n)));
  int primes = 0;
  for (std::int64_t n = 2; n <= 1000; ++n) {
    if (!is_prime(n)) continue;
    ++primes;
    r.require(!ppp::has_independent_events(n), fmt("prime %d nonempty", int(n)));
  }
  const auto four = ppp::independent_event_triples(4).triples;
  r.require(std::find(four.begin(), four.end(), ppp::Triple{2, 2, 1}) != four.end(), "(2,2,1) missing");
  for (std::int64_t k = 2; k <= 31; ++k) {
    r.require(ppp::has_independent_events(k * k), fmt("%d^2 empty", int(k)));
  }
  const double t = seconds_since(t0);
  r.require(t < 5.0, fmt("runtime %.2f s", t));
  if (r.pass) r.detail = fmt("%d primes empty, squares 4..961 nonempty, %.3f s", primes, t);
  return r;
}

Result inaccuracy_suite() {
  Result r;
  const DiscreteDistribution half({0.5, 0.5});
  const double hand = kerridge_inaccuracy(half, DiscreteDistribution({0.9, 0.1}), AlphaOrder{2.0});
  r.require(std::abs(hand - 1.0) <= 1e-12, fmt("hand value %.17g", hand));
  const DensitySpec uniform([](double) { return 1.0; }, 0.0, 1.0);
  const DensitySpec exponential([](double x) { return std::exp(-x); }, 0.0, kInf);
  const auto beta1 = pathway::Pathway({0.5, 2.0, 1.0, 1.0, 1.0}).as_density_spec();
  double worst = 0.0;
  for (const auto* f : {&uniform, &exponential, &beta1}) {
    for (double a : {0.5, 1.5}) worst = std::max(worst, m_alpha_expectation_residual(*f, AlphaOrder{a}));
  }
  r.require(worst <= 1e-10, fmt("expected-value residual %.3g", worst));
  r.detail = fmt("hand value %.17g, max expected-value residual %.3g", hand, worst) +
             (r.detail.empty() ? "" : " | " + r.detail);
  return r;
}

Result cli_determinism() {
  Result r;
  const std::vector<std::vector<std::string>> cases = {
      {"entropy", "--family", "renyi", "--probs", "0.1,0.2,0.7", "--sweep", "0.5:3:0.25"},
      {"compose", "--random", "50"},
      {"pathway", "--alpha", "0.5", "--sample", "200"},
      {"pathway", "--special", "wigner", "--q", "2", "--table", "0:5:0.5"},
      {"maxent", "--alpha", "0.5", "--grid", "0:1:0.005", "--constraint", "1:0.4"},
      {"ode", "--case", "general", "--alpha", "1.4", "--gamma", "2"},
      {"ppp", "--scan", "60"},
      {"inaccuracy", "--alpha", "2", "--f", "0.5,0.5", "--q", "0.9,0.1"},
  };
  int runs = 0;
  for (const char* format : {"csv", "json"}) {
    for (const auto& tail : cases) {
      std::vector<std::string> args{"--seed", "7", "--format", format};
      args.insert(args.end(), tail.begin(), tail.end());
      std::string first;
      for (int rep = 0; rep < 3; ++rep) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        ++runs;
        if (code != 0) {
          r.require(false, tail[0] + " exited " + std::to_string(code));
          break;
        }
        if (rep == 0) {
          first = out.str();
        } else {
          r.require(out.str() == first, tail[0] + " (" + format + ") output differs");
        }
      }
    }
  }
  if (r.pass) r.detail = fmt("%d invocations over 8 subcommand forms, csv and json, identical", runs);
  return r;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Result()>> criteria[] = {
      {"composition laws", composition_laws},
      {"composition coefficient table", coefficient_table},
      {"limit law alpha -> 1", limit_law},
      {"Shannon on uniform distributions", shannon_uniform},
      {"pathway normalization", pathway_normalization},
      {"pathway continuity at alpha = 1", pathway_limit},
      {"ODE residuals", ode_suite},
      {"maximum-entropy round trips", maxent_round_trips},
      {"independent events", ppp_suite},
      {"inaccuracy", inaccuracy_suite},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Result res;
    try {
      res = check();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("threw: ") + e.what();
    }
    if (!res.pass) ++failures;
    std::printf("%s %2d %s: %s\n", res.pass ? "PASS" : "FAIL", index, name, res.detail.c_str());
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
