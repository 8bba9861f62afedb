#pragma once

/**
 * @file cli.hpp
 * @brief Batch command-line front end. Every subcommand produces a table
 * that is rendered as CSV (one header line) or as a JSON document.
 *
 * Exit codes: 0 success, 1 I/O or internal failure, 2 usage error,
 * 3 domain error, 4 numerical error. Failures print a one-line JSON error
 * record on the error stream and nothing on the output stream.
 */

#include <pathent/csv.hpp>
#include <pathent/discrete.hpp>
#include <pathent/divergence.hpp>
#include <pathent/error.hpp>
#include <pathent/maxent.hpp>
#include <pathent/numeric.hpp>
#include <pathent/ode.hpp>
#include <pathent/pathway.hpp>
#include <pathent/ppp.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace pathent::cli {

inline constexpr const char* kSeedEnv = "PATHWAY_ENTROPY_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Malformed arguments that CLI11 itself cannot detect (list and range syntax).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Cell = nlohmann::ordered_json;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match columns");
    rows.push_back(std::move(row));
  }
};

inline std::string cell_text(const Cell& c) {
  if (c.is_number_float()) return csv::format_double(c.get<double>());
  if (c.is_number_unsigned()) return std::to_string(c.get<std::uint64_t>());
  if (c.is_number_integer()) return csv::format_int(c.get<std::int64_t>());
  if (c.is_string()) return c.get<std::string>();
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  return "";
}

inline std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["command"] = t.command;
    doc["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = r[i];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
    return os.str();
  }
  csv::Writer w(os, t.columns);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    cells.reserve(r.size());
    for (const auto& c : r) cells.push_back(cell_text(c));
    w.row(cells);
  }
  return os.str();
}

namespace detail {

inline double parse_number(std::string_view text, std::string_view what) {
  try {
    return csv::parse_double(text);
  } catch (const DomainError&) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
}

inline std::vector<double> parse_list(const std::string& text, std::string_view what) {
  std::vector<double> out;
  for (auto cell : csv::split(text, ',')) out.push_back(parse_number(cell, what));
  return out;
}

/// start:stop:step, inclusive of stop when it lies within half a step of
/// the last grid point.
inline std::vector<double> parse_sweep(const std::string& text, std::string_view what) {
  const auto parts = csv::split(text, ':');
  if (parts.size() != 3) throw UsageError(std::string(what) + " expects start:stop:step");
  const double start = parse_number(parts[0], what);
  const double stop = parse_number(parts[1], what);
  const double step = parse_number(parts[2], what);
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step == 0.0 ||
      (stop - start) / step < 0.0) {
    throw UsageError(std::string(what) + ": step must be nonzero and point from start to stop");
  }
  const double span = (stop - start) / step;
  if (span > 1e7) throw UsageError(std::string(what) + ": too many points");
  const auto count = static_cast<std::int64_t>(std::floor(span + 0.5)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer");
    }
    return v;
  }
  return kDefaultSeed;
}

inline std::vector<double> random_probabilities(std::mt19937_64& gen, std::size_t k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (auto& v : p) {
    v = open_unit_uniform(gen);
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

inline std::string regime_name(pathway::Regime r) {
  switch (r) {
    case pathway::Regime::type1_beta: return "type1-beta";
    case pathway::Regime::generalized_gamma: return "generalized-gamma";
    case pathway::Regime::type2_beta: return "type2-beta";
  }
  return "unknown";
}

}  // namespace detail

struct PathwayOptions {
  double alpha = 1.0, gamma = 1.0, delta = 1.0, s = 1.0, beta = 1.0;
};

/// Registers --alpha/--gamma/--delta/--s/--beta on a subcommand.
inline void add_pathway_options(CLI::App* sub, PathwayOptions& p) {
  sub->add_option("--alpha", p.alpha, "pathway parameter alpha")->capture_default_str();
  sub->add_option("--gamma", p.gamma, "power gamma")->capture_default_str();
  sub->add_option("--delta", p.delta, "power delta")->capture_default_str();
  sub->add_option("--s", p.s, "scale s")->capture_default_str();
  sub->add_option("--beta", p.beta, "exponent beta")->capture_default_str();
}

inline pathway::PathwayParams to_params(const PathwayOptions& o) {
  return {o.alpha, o.gamma, o.delta, o.s, o.beta};
}

/// Parses args (without the program name), runs one subcommand and writes
/// its table to `out` or to --output.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized entropies, pathway densities and their identities"};
  app.name("pathent");
  app.fallthrough();
  app.require_subcommand(1);

  std::string format = "csv";
  std::string output_path;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", output_path, "write to this file instead of stdout");
  app.add_option("--seed", seed_flag, std::string("RNG seed (default: $") + kSeedEnv + " or 1)");

  // entropy
  auto* ent = app.add_subcommand("entropy", "entropy of a discrete distribution");
  std::string ent_family = "shannon";
  double ent_alpha = 1.0;
  double ent_A = 1.0;
  std::string ent_probs;
  std::string ent_sweep;
  ent->add_option("--family", ent_family, "shannon, renyi, havrda-charvat, tsallis, mathai, mathai-additive")
      ->capture_default_str();
  ent->add_option("--alpha", ent_alpha, "order alpha")->capture_default_str();
  ent->add_option("--A,--shannon-constant", ent_A, "Shannon constant A")->capture_default_str();
  ent->add_option("--probs", ent_probs, "comma-separated probabilities")->required();
  ent->add_option("--sweep", ent_sweep, "alpha sweep start:stop:step");

  // compose
  auto* comp = app.add_subcommand("compose", "residuals of the composition laws");
  std::string comp_family = "tsallis";
  double comp_alpha = 0.5;
  std::string comp_p, comp_q, comp_r;
  int comp_random = 0;
  comp->add_option("--family", comp_family)->capture_default_str();
  comp->add_option("--alpha", comp_alpha)->capture_default_str();
  auto* opt_p = comp->add_option("--p", comp_p, "first distribution");
  comp->add_option("--q", comp_q, "second distribution");
  comp->add_option("--r", comp_r, "optional third distribution (trivariate law)");
  auto* opt_random = comp->add_option("--random", comp_random, "number of random pairs")
                         ->check(CLI::PositiveNumber);
  opt_p->excludes(opt_random);

  // pathway
  auto* pw = app.add_subcommand("pathway", "pathway density tables, samples and metadata");
  PathwayOptions pw_opts;
  add_pathway_options(pw, pw_opts);
  std::string pw_special;
  double pw_q = 0.0, pw_beta_scale = 1.0, pw_shape = 1.0;
  std::string pw_table;
  bool pw_cdf = false;
  std::size_t pw_sample = 0;
  bool pw_info = false;
  pw->add_option("--special", pw_special,
                 "tsallis_q_exponential, type1_beta, type2_beta, stretched_exponential, "
                 "maxwell_boltzmann, gaussian_half, gaussian, weibull, wigner");
  auto* opt_q = pw->add_option("--q", pw_q, "Wigner order q");
  auto* opt_bs = pw->add_option("--beta-scale", pw_beta_scale, "Wigner scale");
  auto* opt_shape = pw->add_option("--shape", pw_shape, "Weibull shape");
  auto* opt_table = pw->add_option("--table", pw_table, "x grid start:stop:step");
  pw->add_flag("--cdf", pw_cdf, "add a cdf column to --table");
  auto* opt_sample = pw->add_option("--sample", pw_sample, "number of draws");
  auto* opt_info = pw->add_flag("--info", pw_info, "parameters and normalizing constant");
  opt_table->excludes(opt_sample)->excludes(opt_info);
  opt_sample->excludes(opt_info);

  // maxent
  auto* me = app.add_subcommand("maxent", "maximum-entropy density on a grid");
  double me_alpha = 0.5;
  std::string me_grid = "0:1:0.005";
  std::vector<std::string> me_constraints;
  bool me_escort = false;
  bool me_density = false;
  me->add_option("--alpha", me_alpha)->capture_default_str();
  me->add_option("--grid", me_grid, "grid start:stop:step")->capture_default_str();
  me->add_option("--constraint", me_constraints, "moment constraint exponent:target");
  me->add_flag("--escort", me_escort, "constraint under the escort density");
  me->add_flag("--density", me_density, "emit the density on the grid");

  // ode
  auto* od = app.add_subcommand("ode", "residual sweeps of the kernel's ODEs");
  PathwayOptions od_opts;
  add_pathway_options(od, od_opts);
  std::string od_case = "general";
  int od_points = 20;
  double od_h = 1e-5;
  bool od_summary = false;
  bool od_omit_beta = false;
  od->add_option("--case", od_case,
                 "general, reduced-beta, reduced-beta1, tsallis-eta, tsallis-alpha")
      ->capture_default_str();
  od->add_option("--points", od_points)->check(CLI::PositiveNumber)->capture_default_str();
  od->add_option("--step", od_h, "central-difference step h")->capture_default_str();
  od->add_flag("--summary", od_summary, "only the worst point");
  od->add_flag("--omit-beta-factor", od_omit_beta, "tsallis-eta without the beta factor");

  // ppp
  auto* pp = app.add_subcommand("ppp", "independent events on equiprobable spaces");
  std::int64_t pp_scan = 0, pp_n = 0;
  auto* opt_scan = pp->add_option("--scan", pp_scan, "count triples for n = 2..N");
  auto* opt_n = pp->add_option("--n", pp_n, "list triples for one n");
  opt_scan->excludes(opt_n);

  // inaccuracy
  auto* inac = app.add_subcommand("inaccuracy", "generalized inaccuracy of q against f");
  double inac_alpha = 2.0;
  std::string inac_f, inac_q;
  inac->add_option("--alpha", inac_alpha)->capture_default_str();
  inac->add_option("--f", inac_f, "true distribution")->required();
  inac->add_option("--q", inac_q, "assigned distribution")->required();

  auto error_record = [&](const std::string& kind, const std::string& category,
                          const std::string& message, int code) {
    nlohmann::ordered_json rec;
    rec["error"] = kind;
    rec["category"] = category;
    rec["message"] = message;
    rec["exit_code"] = code;
    err << rec.dump() << '\n';
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      return app.exit(e, out, err);
    }
    return error_record("UsageError", "usage", e.what(), 2);
  }

  Table table;
  try {
    const std::uint64_t seed = detail::resolve_seed(seed_flag);

    if (*ent) {
      table.command = "entropy";
      const EntropyFamily family(parse_family(ent_family), ent_A);
      const DiscreteDistribution p(detail::parse_list(ent_probs, "--probs"));
      const auto alphas =
          ent_sweep.empty() ? std::vector<double>{ent_alpha} : detail::parse_sweep(ent_sweep, "--sweep");
      table.columns = {"family", "alpha", "entropy"};
      for (double a : alphas) {
        table.add({std::string(family_name(family.tag)), a, entropy(p, family, AlphaOrder{a})});
      }
    } else if (*comp) {
      table.command = "compose";
      const EntropyFamily family(parse_family(comp_family));
      const AlphaOrder order{comp_alpha};
      const double a = composition_coefficient(family, order);
      const std::string fname(family_name(family.tag));
      if (comp_random > 0) {
        std::mt19937_64 gen(seed);
        std::uniform_int_distribution<int> size(2, 6);
        table.columns = {"index", "size_p", "size_q", "family", "alpha", "coefficient", "residual"};
        for (int i = 0; i < comp_random; ++i) {
          const auto kp = static_cast<std::size_t>(size(gen));
          const auto kq = static_cast<std::size_t>(size(gen));
          const DiscreteDistribution p(detail::random_probabilities(gen, kp));
          const DiscreteDistribution q(detail::random_probabilities(gen, kq));
          table.add({i, kp, kq, fname, comp_alpha, a,
                     composition_residual_bivariate(p, q, family, order)});
        }
      } else {
        if (comp_p.empty() || comp_q.empty()) throw UsageError("compose needs --p and --q, or --random N");
        const DiscreteDistribution p(detail::parse_list(comp_p, "--p"));
        const DiscreteDistribution q(detail::parse_list(comp_q, "--q"));
        table.columns = {"law", "family", "alpha", "coefficient", "residual"};
        table.add({"bivariate", fname, comp_alpha, a,
                   composition_residual_bivariate(p, q, family, order)});
        if (!comp_r.empty()) {
          const DiscreteDistribution r(detail::parse_list(comp_r, "--r"));
          table.add({"trivariate", fname, comp_alpha, a,
                     composition_residual_trivariate(p, q, r, family, order)});
        }
      }
    } else if (*pw) {
      table.command = "pathway";
      // The full-line Gaussian is the symmetric reflection of gaussian_half.
      const bool full_line = pw_special == "gaussian";
      pathway::PathwayParams params = to_params(pw_opts);
      if (!pw_special.empty()) {
        pathway::NamedParams named;
        for (const char* key : {"alpha", "gamma", "delta", "s", "beta"}) {
          if (pw->count(std::string("--") + key) > 0) {
            const auto& o = pw_opts;
            const std::string k(key);
            named[k] = k == "alpha" ? o.alpha : k == "gamma" ? o.gamma : k == "delta" ? o.delta
                     : k == "s"     ? o.s : o.beta;
          }
        }
        if (opt_q->count() > 0) named["q"] = pw_q;
        if (opt_bs->count() > 0) named["beta_scale"] = pw_beta_scale;
        if (opt_shape->count() > 0) named["shape"] = pw_shape;
        params = pathway::special_case(full_line ? "gaussian_half" : pw_special, named);
      }
      const pathway::Pathway dist(params);

      auto density = [&](double x) {
        return full_line ? 0.5 * dist.density(std::abs(x)) : dist.density(x);
      };
      auto cdf = [&](double x) {
        if (!full_line) return dist.cdf(x);
        const double half = 0.5 * dist.cdf(std::abs(x));
        return x >= 0.0 ? 0.5 + half : 0.5 - half;
      };

      if (opt_table->count() > 0) {
        table.columns = {"x", "density"};
        if (pw_cdf) table.columns.push_back("cdf");
        for (double x : detail::parse_sweep(pw_table, "--table")) {
          std::vector<Cell> row{x, density(x)};
          if (pw_cdf) row.emplace_back(cdf(x));
          table.add(std::move(row));
        }
      } else if (opt_sample->count() > 0) {
        table.columns = {"index", "value"};
        if (full_line) {
          const pathway::QuantileTable qt(dist);
          std::mt19937_64 gen(seed);
          for (std::size_t i = 0; i < pw_sample; ++i) {
            const double v = 2.0 * open_unit_uniform(gen) - 1.0;
            const double x = qt.quantile(std::abs(v));
            table.add({i, v < 0.0 ? -x : x});
          }
        } else {
          const auto xs = pathway::sample(params, pw_sample, seed);
          for (std::size_t i = 0; i < xs.size(); ++i) table.add({i, xs[i]});
        }
      } else {
        const auto sup = dist.support_interval();
        table.columns = {"name",  "alpha",         "gamma",         "delta",
                         "s",     "beta",          "regime",        "support_lower",
                         "support_upper", "normalizing_constant"};
        table.add({pw_special.empty() ? std::string("custom") : pw_special, params.alpha,
                   params.gamma, params.delta, params.s, params.beta_exp,
                   detail::regime_name(dist.regime()), full_line ? -sup.upper : sup.lower,
                   sup.upper,
                   full_line ? 0.5 * dist.normalizing_constant() : dist.normalizing_constant()});
      }
    } else if (*me) {
      table.command = "maxent";
      maxent::MaxEntProblem problem;
      problem.grid = detail::parse_sweep(me_grid, "--grid");
      problem.order = AlphaOrder{me_alpha};
      problem.variant = me_escort ? maxent::Variant::escort : maxent::Variant::plain;
      for (const auto& c : me_constraints) {
        const auto parts = csv::split(c, ':');
        if (parts.size() != 2) throw UsageError("--constraint expects exponent:target");
        problem.constraints.push_back({detail::parse_number(parts[0], "--constraint"),
                                       detail::parse_number(parts[1], "--constraint")});
      }
      const auto sol = maxent::solve(problem);
      if (me_density) {
        table.columns = {"x", "density"};
        for (std::size_t i = 0; i < problem.grid.size(); ++i) {
          table.add({problem.grid[i], sol.density_values[i]});
        }
      } else {
        table.columns = {"alpha", "variant", "iterations", "objective", "euler_residual"};
        for (std::size_t i = 0; i < sol.multipliers.size(); ++i) {
          table.columns.push_back("multiplier_" + std::to_string(i));
        }
        std::vector<Cell> row{me_alpha, me_escort ? "escort" : "plain", sol.iterations,
                              sol.objective, sol.euler_residual};
        for (double m : sol.multipliers) row.emplace_back(m);
        table.add(std::move(row));
      }
    } else if (*od) {
      table.command = "ode";
      const ode::OdeCase c(to_params(od_opts), ode::parse_reduction(od_case), od_omit_beta);
      const auto range = ode::default_sweep_range(c.params());
      if (od_summary) {
        const auto rep = ode::residual_sweep(c, od_points, od_h, range);
        table.columns = {"case", "points", "h", "max_residual", "argmax"};
        table.add({od_case, rep.points, od_h, rep.max_residual, rep.argmax});
      } else {
        table.columns = {"x", "lhs", "lhs_analytic", "rhs", "residual"};
        for (double x : ode::sweep_points(od_points, range)) {
          const auto r = ode::evaluate(c, x, od_h);
          table.add({r.x, r.lhs, r.lhs_analytic, r.rhs, r.residual});
        }
      }
    } else if (*pp) {
      table.command = "ppp";
      if (opt_scan->count() > 0) {
        table.columns = {"n", "count"};
        for (const auto& [n, count] : ppp::scan(pp_scan)) table.add({n, count});
      } else if (opt_n->count() > 0) {
        table.columns = {"x", "y", "z"};
        for (const auto& t : ppp::independent_event_triples(pp_n).triples) {
          table.add({t.x, t.y, t.z});
        }
      } else {
        throw UsageError("ppp needs --scan N or --n N");
      }
    } else if (*inac) {
      table.command = "inaccuracy";
      const DiscreteDistribution f(detail::parse_list(inac_f, "--f"));
      const DiscreteDistribution q(detail::parse_list(inac_q, "--q"));
      table.columns = {"alpha", "inaccuracy"};
      table.add({inac_alpha, kerridge_inaccuracy(f, q, AlphaOrder{inac_alpha})});
    }
  } catch (const UsageError& e) {
    return error_record("UsageError", "usage", e.what(), 2);
  } catch (const DomainError& e) {
    return error_record(e.kind(), "domain", e.what(), 3);
  } catch (const NumericalError& e) {
    return error_record(e.kind(), "numerical", e.what(), 4);
  } catch (const std::exception& e) {
    return error_record("InternalError", "internal", e.what(), 1);
  }

  const std::string text = render(table, format);
  if (output_path.empty()) {
    out << text;
    out.flush();
  } else {
    std::ofstream file(output_path, std::ios::binary);
    file << text;
    if (!file) return error_record("IoError", "io", "cannot write '" + output_path + "'", 1);
  }
  return 0;
}

}  // namespace pathent::cli
