#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod integration and bracketing root finding.
 *
 * Every continuous quantity in the library funnels through `integrate`, so
 * the floating-point policy (rule, error estimate, interval transforms,
 * stopping test) lives here and nowhere else.
 *
 * The rule is the 7-point Gauss / 15-point Kronrod pair with the QUADPACK
 * error heuristic. Intervals are bisected globally, always splitting the
 * segment with the largest error estimate. Infinite ranges are cut at a
 * distance of one from the finite end and the unbounded part is mapped by
 *
 *     x = a + (1 - u) / u,   u in (0, 1],   dx = du / u^2
 *
 * so that the point at infinity sits at u = 0, where doubles are dense and
 * power-law tails become integrable endpoint singularities.
 */

#include <pathent/error.hpp>
#include <pathent/numeric.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace pathent {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
  double lower = 0.0;
  double upper = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;

  void validate() const {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
      throw DomainError("quadrature interval requires lower < upper");
    }
    if (lower == kInf || upper == -kInf) {
      throw DomainError("quadrature interval is empty at infinity");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
      throw DomainError("quadrature tolerances must be positive");
    }
    if (max_subdivisions < 1) {
      throw DomainError("max_subdivisions must be at least 1");
    }
  }

  /// Same tolerances over another interval.
  QuadratureSpec over(double lo, double hi) const {
    QuadratureSpec s = *this;
    s.lower = lo;
    s.upper = hi;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// Abscissae and weights of the 15-point Kronrod rule and embedded 7-point
// Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double resabs = 0.0;
  int piece = 0;
};

struct SegmentOrder {
  bool operator()(const Segment& l, const Segment& r) const noexcept {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  }
};

enum class Map { identity, to_plus_inf, to_minus_inf };

struct Piece {
  Map map = Map::identity;
  double anchor = 0.0;
};

template <class F>
double eval_checked(F& f, double x) {
  const double v = static_cast<double>(f(x));
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand returned a non-finite value at x = " << x;
    throw NonFinite(os.str());
  }
  return v;
}

template <class F>
double eval_piece(F& f, const Piece& piece, double t) {
  switch (piece.map) {
    case Map::identity:
      return eval_checked(f, t);
    case Map::to_plus_inf:
    case Map::to_minus_inf: {
      const double offset = (1.0 - t) / t;
      const double x = piece.map == Map::to_plus_inf ? piece.anchor + offset
                                                     : piece.anchor - offset;
      const double fx = eval_checked(f, x);
      if (fx == 0.0) return 0.0;
      const double v = fx / (t * t);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os.precision(17);
        os << "transformed integrand overflowed at x = " << x;
        throw NonFinite(os.str());
      }
      return v;
    }
  }
  return 0.0;
}

template <class F>
Segment gauss_kronrod15(F& f, const Piece& piece, double a, double b,
                        int piece_index) {
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();

  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  const double fc = eval_piece(f, piece, centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = eval_piece(f, piece, centr - absc);
    const double f2 = eval_piece(f, piece, centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = eval_piece(f, piece, centr - absc);
    const double f2 = eval_piece(f, piece, centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  Segment s;
  s.a = a;
  s.b = b;
  s.piece = piece_index;
  s.value = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * epmach)) {
    abserr = std::max(epmach * 50.0 * resabs, abserr);
  }
  s.error = abserr;
  s.resabs = resabs;
  return s;
}

}  // namespace detail

/// Integrates `f` over [spec.lower, spec.upper] (either end may be infinite)
/// and returns the value together with the final error estimate.
///
/// Stops once the summed error estimate is below
/// max(abs_tol, rel_tol * |I|, 100 * eps * integral of |f|); the last term is
/// the round-off floor of the rule. Throws NonConvergence when the
/// subdivision budget runs out first and NonFinite when `f` produces NaN or
/// infinity at an evaluation point.
template <class F>
QuadratureResult integrate_with_error(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  using detail::Map;
  using detail::Piece;
  using detail::Segment;

  // Each piece integrates over its own parameter range.
  struct Initial {
    Piece piece;
    double lo;
    double hi;
  };
  std::vector<Initial> init;
  const double a = spec.lower;
  const double b = spec.upper;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) {
    init.push_back({{Map::identity, 0.0}, a, b});
  } else if (!lo_inf && hi_inf) {
    init.push_back({{Map::identity, 0.0}, a, a + 1.0});
    init.push_back({{Map::to_plus_inf, a + 1.0}, 0.0, 1.0});
  } else if (lo_inf && !hi_inf) {
    init.push_back({{Map::to_minus_inf, b - 1.0}, 0.0, 1.0});
    init.push_back({{Map::identity, 0.0}, b - 1.0, b});
  } else {
    init.push_back({{Map::to_minus_inf, -1.0}, 0.0, 1.0});
    init.push_back({{Map::identity, 0.0}, -1.0, 1.0});
    init.push_back({{Map::to_plus_inf, 1.0}, 0.0, 1.0});
  }

  std::vector<Piece> pieces;
  std::priority_queue<Segment, std::vector<Segment>, detail::SegmentOrder> heap;
  std::vector<Segment> settled;
  for (std::size_t i = 0; i < init.size(); ++i) {
    pieces.push_back(init[i].piece);
    heap.push(detail::gauss_kronrod15(f, pieces.back(), init[i].lo, init[i].hi,
                                      static_cast<int>(i)));
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  int subdivisions = 0;

  auto totals = [&]() {
    CompensatedSum value;
    CompensatedSum error;
    CompensatedSum absval;
    auto visit = [&](const Segment& s) {
      value += s.value;
      error += s.error;
      absval += s.resabs;
    };
    auto copy = heap;
    while (!copy.empty()) {
      visit(copy.top());
      copy.pop();
    }
    for (const auto& s : settled) visit(s);
    return std::array<double, 3>{value.value(), error.value(), absval.value()};
  };

  // Running sums for the stopping test; recomputed exactly on exit.
  double run_value = 0.0;
  double run_error = 0.0;
  double run_abs = 0.0;
  {
    const auto t = totals();
    run_value = t[0];
    run_error = t[1];
    run_abs = t[2];
  }

  auto tolerance = [&](double value, double absval) {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(value),
                     100.0 * eps * absval});
  };

  while (run_error > tolerance(run_value, run_abs)) {
    if (heap.empty()) {
      throw NonConvergence(
          "quadrature error is concentrated in segments too narrow to split");
    }
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream os;
      os.precision(3);
      os << "quadrature budget of " << spec.max_subdivisions
         << " subdivisions exhausted (error estimate " << run_error << ")";
      throw NonConvergence(os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      settled.push_back(worst);
      continue;
    }
    const Piece& piece = pieces[static_cast<std::size_t>(worst.piece)];
    const Segment left = detail::gauss_kronrod15(f, piece, worst.a, mid, worst.piece);
    const Segment right = detail::gauss_kronrod15(f, piece, mid, worst.b, worst.piece);
    ++subdivisions;
    run_value += (left.value + right.value) - worst.value;
    run_error += (left.error + right.error) - worst.error;
    run_abs += (left.resabs + right.resabs) - worst.resabs;
    heap.push(left);
    heap.push(right);
    if (subdivisions % 64 == 0) {
      const auto t = totals();
      run_value = t[0];
      run_error = t[1];
      run_abs = t[2];
    }
  }

  const auto t = totals();
  return QuadratureResult{t[0], t[1], subdivisions};
}

template <class F>
double integrate(F&& f, const QuadratureSpec& spec) {
  return integrate_with_error(std::forward<F>(f), spec).value;
}

/// Brent's bracketing root finder. Returns x* once the bracket is narrower
/// than `tol` (relative to |x*| above one) or f(x*) == 0. Requires
/// f(a) * f(b) <= 0; throws NoSignChange otherwise.
template <class F>
double find_root(F&& f, double a, double b, double tol = 1e-12,
                 int max_iterations = 300) {
  if (!(tol > 0.0)) throw DomainError("root tolerance must be positive");
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || std::isinf(b)) {
    throw DomainError("root bracket must be finite");
  }
  double fa = static_cast<double>(f(a));
  double fb = static_cast<double>(f(b));
  if (std::isnan(fa) || std::isnan(fb)) {
    throw NonFinite("root function returned NaN at a bracket endpoint");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change on [" << a << ", " << b << "]";
    throw NoSignChange(os.str());
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      const double sfa = fb / fa;
      double p = 0.0;
      double q = 0.0;
      if (a == c) {
        p = 2.0 * xm * sfa;
        q = 1.0 - sfa;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = sfa * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (sfa - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = static_cast<double>(f(b));
    if (std::isnan(fb)) throw NonFinite("root function returned NaN");
  }
  throw NonConvergence("root finder exceeded its iteration budget");
}

}  // namespace pathent
