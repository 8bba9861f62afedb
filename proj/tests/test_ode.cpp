#include <pathent/ode.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace pathent;
using namespace pathent::ode;
using pathent::pathway::PathwayParams;

namespace {

PathwayParams params(double alpha, double gamma = 1.0, double delta = 1.0, double s = 1.0,
                     double beta = 1.0) {
  return {alpha, gamma, delta, s, beta};
}

}  // namespace

TEST(Ode, TsallisPowerLawHandCase) {
  // g = (1 + x)^(-1), g' = -(1 + x)^(-2) = -g^2
  const OdeCase c(params(2.0), Reduction::tsallis_alpha);
  const auto r = evaluate(c, 1.0, 1e-5);
  EXPECT_NEAR(r.lhs, -0.25, 1e-9);
  EXPECT_NEAR(r.rhs, -0.25, 1e-15);
  EXPECT_LE(r.residual, 1e-9);
}

TEST(Ode, GeneralFormIsAnIdentity) {
  auto gen = testing_support::rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = testing_support::random_pathway(gen, trial % 3 - 1);
    if (trial % 7 == 0) p.gamma = 1.0;  // first right-hand term vanishes
    const OdeCase c(p, Reduction::general);
    for (double x : sweep_points(8, default_sweep_range(p))) {
      const auto r = evaluate(c, x, default_step(x));
      EXPECT_LE(r.residual, 1e-8 * std::max(std::abs(r.lhs), 1.0)) << "alpha=" << p.alpha;
      EXPECT_NEAR(r.lhs_analytic, r.rhs, 1e-12 * std::max(std::abs(r.rhs), 1.0));
    }
  }
}

TEST(Ode, ReducedFormWhenDeltaMatches) {
  // gamma = 3, alpha = 1.5, beta = 1: delta = (gamma-1)(alpha-1)/beta = 1
  const OdeCase c(params(1.5, 3.0, 1.0), Reduction::reduced_beta1);
  EXPECT_LE(residual_sweep(c, 20, 1e-5).max_residual, 1e-7);
  const OdeCase cb(params(1.5, 3.0, 0.5, 1.0, 2.0), Reduction::reduced_beta);
  EXPECT_LE(residual_sweep(cb, 20, 1e-5).max_residual, 1e-7);
}

TEST(Ode, ReductionIsGatedButIdentityStillHolds) {
  const auto p = params(1.5, 3.0, 1.3);
  EXPECT_THROW(OdeCase(p, Reduction::reduced_beta1), DomainError);
  EXPECT_THROW(OdeCase(params(0.5, 3.0, 1.0), Reduction::reduced_beta), DomainError);
  EXPECT_THROW(OdeCase(params(1.5, 1.0, 1.0), Reduction::reduced_beta), DomainError);
  EXPECT_THROW(OdeCase(params(1.5, 1.0, 1.0, 1.0, 2.0), Reduction::tsallis_alpha), DomainError);
  EXPECT_THROW(OdeCase(params(1.5, 2.0), Reduction::tsallis_eta), DomainError);
  EXPECT_LE(residual_sweep(OdeCase(p, Reduction::general), 20, 1e-5).max_residual, 1e-7);
}

TEST(Ode, TsallisEtaNeedsTheBetaFactor) {
  const auto p = params(1.5, 1.0, 1.0, 1.0, 2.0);
  const OdeCase with(p, Reduction::tsallis_eta);
  EXPECT_DOUBLE_EQ(with.eta(), 1.25);
  EXPECT_LE(residual_sweep(with, 20, 1e-5).max_residual, 1e-7);
  // Dropping beta only works when beta = 1.
  EXPECT_GT(residual_sweep(OdeCase(p, Reduction::tsallis_eta, true), 20, 1e-5).max_residual, 1e-2);
  EXPECT_LE(residual_sweep(OdeCase(params(1.5), Reduction::tsallis_eta, true), 20, 1e-5).max_residual,
            1e-7);
}

TEST(Ode, StencilConvergesQuadratically) {
  const OdeCase c(params(1.3, 2.0, 1.5, 0.8, 1.2), Reduction::general);
  const double x = 0.7;
  const double floor = 1e-10 * std::max(std::abs(evaluate(c, x, 1e-5).lhs), 1.0);
  double prev = 0.0;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const double r = residual(c, x, h);
    if (prev > 0.0 && r > floor) EXPECT_GT(prev / r, 50.0) << "h=" << h;
    prev = r;
  }
}

TEST(Ode, StencilMustStayInsideSupport) {
  const OdeCase c(params(0.5), Reduction::general);
  EXPECT_THROW(evaluate(c, 1e-6, 1e-5), DomainError);
  EXPECT_THROW(evaluate(c, 2.0 - 1e-6, 1e-5), DomainError);
  EXPECT_THROW(evaluate(c, 1.0, 0.0), DomainError);
  EXPECT_NO_THROW(evaluate(c, 1.0, 1e-5));
}

TEST(Ode, SweepRangesAndNames) {
  const auto bounded = default_sweep_range(params(0.5));
  EXPECT_DOUBLE_EQ(bounded.lower, 0.1);
  EXPECT_DOUBLE_EQ(bounded.upper, 1.8);
  const auto xs = sweep_points(1, {1.0, 4.0});
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_DOUBLE_EQ(xs[0], 2.0);
  for (auto r : {Reduction::general, Reduction::reduced_beta, Reduction::reduced_beta1,
                 Reduction::tsallis_eta, Reduction::tsallis_alpha}) {
    EXPECT_EQ(parse_reduction(reduction_name(r)), r);
  }
  EXPECT_THROW(parse_reduction("riccati"), UnknownName);
}
