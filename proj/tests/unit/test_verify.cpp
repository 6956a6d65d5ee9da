#include <gtest/gtest.h>

#include <cmath>

#include "lipdisc/constants.hpp"
#include "lipdisc/error.hpp"
#include "lipdisc/verify.hpp"
#include "test_support.hpp"

namespace lipdisc {
namespace {

using test::load_benchmark;
using test::make_spec;

SamplingConfig small_config() {
  SamplingConfig cfg;
  cfg.pair_budget = 4000;
  return cfg;
}

class EulerTightness : public ::testing::TestWithParam<std::string> {};

TEST_P(EulerTightness, LipschitzScalesByT) {
  const SystemSpec s = load_benchmark(GetParam());
  const SamplingConfig cfg = small_config();
  const auto pairs = generate_pairs(s, cfg);
  const double t = s.sampling_time();
  const SupEstimate cont = estimate_gamma_c_pairs(s, pairs, cfg);
  const SupEstimate disc = empirical_lipschitz(build_taylor_model(s, 1), pairs, cfg);
  EXPECT_LE(std::abs(disc.value - t * cont.value), 1e-9 * std::abs(t * cont.value) + 1e-300);
}

TEST_P(EulerTightness, OneSidedScalesByT) {
  const SystemSpec s = load_benchmark(GetParam());
  const SamplingConfig cfg = small_config();
  const auto pairs = generate_pairs(s, cfg);
  const double t = s.sampling_time();
  const SupEstimate cont = estimate_rho_c(s, pairs, cfg);
  const SupEstimate disc = empirical_one_sided(build_taylor_model(s, 1), pairs, cfg);
  EXPECT_LE(std::abs(disc.value - t * cont.value), 1e-9 * std::abs(t * cont.value) + 1e-300);
}

INSTANTIATE_TEST_SUITE_P(Benchmarks, EulerTightness, ::testing::ValuesIn(test::benchmark_names()));

TEST(Empirical, LinearIsZero) {
  const SystemSpec s = load_benchmark("linear-2d");
  for (int k = 1; k <= 3; ++k) {
    const DiscreteModel m = build_taylor_model(s, k);
    EXPECT_EQ(empirical_lipschitz(m, small_config()).value, 0.0);
    EXPECT_EQ(empirical_one_sided(m, small_config()).value, 0.0);
  }
}

TEST(Empirical, NegativeCubeOneSidedFromBelow) {
  const SystemSpec s = make_spec(Matrix{{0}}, {"-x1^3"}, -2, 2);
  const SupEstimate r = empirical_one_sided(build_taylor_model(s, 1), small_config());
  EXPECT_LE(r.value, 0.0);
  EXPECT_GT(r.value, -1e-4);
}

TEST(Verify, LinearPassesWithZeros) {
  for (int k = 1; k <= 3; ++k) {
    const VerificationReport r = verify_bounds(load_benchmark("linear-2d"), k, small_config());
    EXPECT_TRUE(r.all_pass());
    EXPECT_EQ(*r.gamma.formula, 0.0);
    EXPECT_EQ(r.gamma.empirical.value, 0.0);
    EXPECT_EQ(r.rho.empirical.value, 0.0);
    EXPECT_EQ(r.rho.formula.has_value(), k < 3);
  }
}

TEST(Verify, EulerPendulumIsTight) {
  const SamplingConfig cfg = small_config();
  const VerificationReport r = verify_bounds(load_benchmark("pendulum"), 1, cfg);
  EXPECT_TRUE(r.all_pass());
  EXPECT_NEAR(*r.gamma.formula, 0.1 * r.constants.values.gamma_c, 1e-15);
  // Grid sup of |J| is at least the pair-quotient sup, so the margin is
  // non-negative and small.
  EXPECT_GE(r.gamma.margin, 0.0);
  EXPECT_LT(r.gamma.margin, 1e-4);
  EXPECT_NEAR(r.rho.margin, 0.0, 1e-12);
}

// For f = x^2 on [-1, 1] the order-2 map is F(x) = T x^2 + T^2 x^3, whose
// Lipschitz constant 2T + 3T^2 exceeds the formula 2T + 2T^2. The report
// must record the violation rather than hide it.
TEST(Verify, QuadraticScalarViolationIsReported) {
  for (double t : {0.1, 0.05}) {
    const SystemSpec s = make_spec(Matrix{{0}}, {"x1^2"}, -1, 1, t);
    const VerificationReport r = verify_bounds(s, 2, small_config());
    EXPECT_TRUE(r.errors.empty());
    EXPECT_NEAR(*r.gamma.formula, 2 * t + 2 * t * t, 1e-15);
    // A sampled lower bound on the true constant, yet clearly above the formula.
    EXPECT_LE(r.gamma.empirical.value, 2 * t + 3 * t * t + 1e-12);
    EXPECT_GE(r.gamma.empirical.value, 2 * t + 2.5 * t * t);
    EXPECT_FALSE(r.gamma.pass);
    EXPECT_FALSE(r.all_pass());
    EXPECT_EQ(r.gamma.margin, *r.gamma.formula - r.gamma.empirical.value);
  }
}

TEST(Verify, PendulumSecondOrderDominates) {
  const VerificationReport r = verify_bounds(load_benchmark("pendulum"), 2, small_config());
  EXPECT_LE(r.gamma.empirical.value, *r.gamma.formula);
}

TEST(Verify, OrderThreeHasNoOneSidedFormula) {
  const VerificationReport r = verify_bounds(load_benchmark("pendulum"), 3, small_config());
  EXPECT_FALSE(r.rho.formula);
  EXPECT_TRUE(r.rho.pass);
  EXPECT_TRUE(std::isfinite(r.rho.empirical.value));
}

TEST(Verify, WitnessReproducesEmpiricalValue) {
  const SystemSpec s = load_benchmark("van-der-pol");
  const VerificationReport r = verify_bounds(s, 2, small_config());
  const Witness& w = r.gamma.empirical.witness;
  const DiscreteModel m = build_taylor_model(s, 2);
  const double q =
      norm2(m.nonlinear(w.x1, w.u) - m.nonlinear(w.x2, w.u)) / norm2(w.x1 - w.x2);
  EXPECT_EQ(q, r.gamma.empirical.value);
}

TEST(Verify, NumericalFailureIsRecorded) {
  const SystemSpec s = make_spec(Matrix{{0}}, {"ln(x1)"});
  const VerificationReport r = verify_bounds(s, 1, small_config());
  EXPECT_FALSE(r.errors.empty());
  EXPECT_FALSE(r.all_pass());
}

TEST(Verify, RejectsBadOrder) {
  EXPECT_THROW(verify_bounds(load_benchmark("pendulum"), 4, small_config()), ArgumentError);
}

TEST(Verify, Tolerance) {
  EXPECT_DOUBLE_EQ(verify_tolerance(0.0), 1e-9);
  EXPECT_DOUBLE_EQ(verify_tolerance(-2.0), 1e-9 + 2e-6);
}

}  // namespace
}  // namespace lipdisc
