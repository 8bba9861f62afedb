#include <pathent/divergence.hpp>
#include <pathent/pathway.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace pathent;

namespace {

DiscreteDistribution dist(std::vector<double> p) { return DiscreteDistribution(std::move(p)); }

DensitySpec exponential() {
  return DensitySpec([](double x) { return std::exp(-x); }, 0.0, kInf);
}

}  // namespace

TEST(Inaccuracy, HandValues) {
  const auto half = dist({0.5, 0.5});
  EXPECT_NEAR(kerridge_inaccuracy(half, dist({0.9, 0.1}), AlphaOrder{2.0}), 1.0, 1e-12);
  EXPECT_NEAR(kerridge_inaccuracy(half, half, AlphaOrder{2.0}), 1.0, 1e-12);
}

TEST(Inaccuracy, SelfAssignmentIsTheNormalizedSelfTerm) {
  auto gen = testing_support::rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing_support::random_probs(gen, 5);
    const double a = testing_support::random_order(gen, Family::tsallis);
    double e = 0.0;
    for (double v : p) e += v * std::pow(v, a - 1.0);
    const double ref = (e - 1.0) / (std::pow(2.0, 1.0 - a) - 1.0);
    EXPECT_NEAR(kerridge_inaccuracy(dist(p), dist(p), AlphaOrder{a}), ref,
                1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Inaccuracy, NotSymmetricInGeneral) {
  const auto f = dist({0.2, 0.8});
  const auto q = dist({0.6, 0.4});
  const double fq = kerridge_inaccuracy(f, q, AlphaOrder{0.5});
  const double qf = kerridge_inaccuracy(q, f, AlphaOrder{0.5});
  EXPECT_TRUE(std::isfinite(fq));
  EXPECT_TRUE(std::isfinite(qf));
  EXPECT_GT(std::abs(fq - qf), 1e-3);
}

TEST(Inaccuracy, LimitNearOrderOne) {
  // With the 2^(1-alpha) - 1 normalization the self-term tends to the
  // Shannon value in bits.
  auto gen = testing_support::rng(52);
  const auto p = dist(testing_support::random_probs(gen, 6));
  const double bits = entropy(p, Family::shannon) / std::numbers::ln2;
  for (double h : {1e-3, -1e-3}) {
    EXPECT_NEAR(kerridge_inaccuracy(p, p, AlphaOrder{1.0 + h}), bits, 1e-2);
  }
  const auto f = exponential();
  EXPECT_NEAR(kerridge_inaccuracy(f, f, AlphaOrder{1.001}), 1.0 / std::numbers::ln2, 1e-2);
}

TEST(Inaccuracy, ContinuousMatchesClosedForm) {
  const DensitySpec fast([](double x) { return 2.0 * std::exp(-2.0 * x); }, 0.0, kInf);
  auto hc = [](double e, double a) { return (e - 1.0) / (std::pow(2.0, 1.0 - a) - 1.0); };
  // f = e^{-x}, q = 2 e^{-2x}: E_f[q^{a-1}] = 2^{a-1} / (2a - 1). q underflows
  // long before f does; for a > 1 those tail points contribute nothing.
  for (double a : {1.5, 2.5}) {
    EXPECT_NEAR(kerridge_inaccuracy(exponential(), fast, AlphaOrder{a}),
                hc(std::pow(2.0, a - 1.0) / (2.0 * a - 1.0), a), 1e-10);
  }
  // f = 2 e^{-2x}, q = e^{-x}: E_f[q^{a-1}] = 2 / (a + 1)
  for (double a : {0.3, 0.7}) {
    EXPECT_NEAR(kerridge_inaccuracy(fast, exponential(), AlphaOrder{a}), hc(2.0 / (a + 1.0), a),
                1e-10);
  }
}

TEST(Inaccuracy, Preconditions) {
  const auto half = dist({0.5, 0.5});
  EXPECT_THROW(kerridge_inaccuracy(half, dist({1.0, 0.0}), AlphaOrder{2.0}), DomainError);
  EXPECT_THROW(kerridge_inaccuracy(half, dist({0.2, 0.3, 0.5}), AlphaOrder{2.0}), DomainError);
  EXPECT_THROW(kerridge_inaccuracy(half, half, AlphaOrder{1.0}), InvalidOrder);
  EXPECT_THROW(kerridge_inaccuracy(half, half, AlphaOrder{0.0}), InvalidOrder);
  EXPECT_NO_THROW(kerridge_inaccuracy(dist({0.0, 1.0}), dist({1e-3, 1.0 - 1e-3}), AlphaOrder{0.5}));
  const DensitySpec u([](double) { return 1.0; }, 0.0, 1.0);
  EXPECT_THROW(kerridge_inaccuracy(exponential(), u, AlphaOrder{2.0}), DomainError);
}

TEST(ExpectedValueForm, AgreesWithDirectIntegral) {
  const DensitySpec u([](double) { return 1.0; }, 0.0, 1.0);
  for (double a : {0.3, 0.5, 1.5}) {
    EXPECT_LE(m_alpha_expectation_residual(u, AlphaOrder{a}), 1e-12);
    EXPECT_LE(m_alpha_expectation_residual(exponential(), AlphaOrder{a}), 1e-10);
  }
  const pathway::Pathway beta1({0.5, 2.0, 1.0, 1.0, 1.0});
  EXPECT_LE(m_alpha_expectation_residual(beta1.as_density_spec(), AlphaOrder{0.5}), 1e-10);
  auto gen = testing_support::rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = dist(testing_support::random_probs(gen, 6));
    EXPECT_LE(m_alpha_expectation_residual(p, AlphaOrder{testing_support::random_order(gen, Family::mathai)}),
              1e-12);
  }
  EXPECT_THROW(m_alpha_expectation_residual(u, AlphaOrder{2.0}), InvalidOrder);
  EXPECT_THROW(m_alpha_expectation_residual(u, AlphaOrder{1.0}), InvalidOrder);
}
