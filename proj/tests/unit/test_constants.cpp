#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "lipdisc/constants.hpp"
#include "lipdisc/error.hpp"
#include "lipdisc/sampling.hpp"
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

// Dense 1e5-point scan of a scalar objective on [lo, hi]: the oracle for
// one-dimensional suprema.
template <typename F>
double dense_scan(double lo, double hi, F f) {
  double best = -INFINITY;
  const int n = 100000;
  for (int i = 0; i <= n; ++i) best = std::max(best, f(lo + (hi - lo) * i / n));
  return best;
}

TEST(GammaC, PendulumIsOne) {
  const SupEstimate g = estimate_gamma_c(load_benchmark("pendulum"), small_config());
  const double oracle = dense_scan(-1, 1, [](double x) { return std::abs(std::cos(x)); });
  EXPECT_NEAR(g.value, oracle, 1e-3);
  EXPECT_NEAR(g.witness.x1[0], 0.0, 1e-9);
}

TEST(GammaC, Linear) {
  EXPECT_EQ(estimate_gamma_c(load_benchmark("linear-2d"), small_config()).value, 0.0);
}

TEST(GammaC, CubicOnWideBox) {
  const SupEstimate g = estimate_gamma_c(make_spec(Matrix{{0}}, {"x1^3"}, -2, 2), small_config());
  EXPECT_NEAR(g.value, 12.0, 1e-3);
  EXPECT_NEAR(std::abs(g.witness.x1[0]), 2.0, 1e-12);
}

TEST(GammaC, PolishFindsInteriorMaximum) {
  // |f'| = |cos(x - 0.3137)| peaks off the 5-node mesh.
  SamplingConfig cfg = small_config();
  cfg.grid_per_axis = 5;
  const SupEstimate g =
      estimate_gamma_c(make_spec(Matrix{{0}}, {"sin(x1 - 0.3137)"}), cfg);
  EXPECT_NEAR(g.value, 1.0, 1e-9);
  EXPECT_NEAR(g.witness.x1[0], 0.3137, 1e-3);
}

TEST(RhoC, NegativeCubeApproachesZero) {
  const SupEstimate r = estimate_rho_c(make_spec(Matrix{{0}}, {"-x1^3"}, -2, 2), small_config());
  EXPECT_LE(r.value, 0.0);
  EXPECT_GT(r.value, -1e-3);
}

TEST(RhoC, LinearAndIdentity) {
  EXPECT_EQ(estimate_rho_c(load_benchmark("linear-2d"), small_config()).value, 0.0);
  EXPECT_NEAR(estimate_rho_c(make_spec(Matrix{{0}}, {"x1"}), small_config()).value, 1.0, 1e-12);
}

TEST(BetaAndM, Cubic) {
  const BetaAndM bm = estimate_beta_and_m(make_spec(Matrix{{0}}, {"x1^3"}, -2, 2), small_config());
  EXPECT_NEAR(bm.beta.value, 12.0, 1e-3);
  EXPECT_NEAR(bm.big_m.value, 8.0, 1e-3);
}

TEST(BetaAndM, Pendulum) {
  const BetaAndM bm = estimate_beta_and_m(load_benchmark("pendulum"), small_config());
  EXPECT_NEAR(bm.beta.value, std::sin(1.0), 1e-3);
  EXPECT_NEAR(bm.big_m.value, std::sin(1.0), 1e-3);
}

TEST(BetaAndM, Linear) {
  const BetaAndM bm = estimate_beta_and_m(load_benchmark("linear-2d"), small_config());
  EXPECT_EQ(bm.beta.value, 0.0);
  EXPECT_EQ(bm.big_m.value, 0.0);
}

class ConstantProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(ConstantProperties, OneSidedBelowTwoSided) {
  const ConstantEstimates c = estimate_constants(load_benchmark(GetParam()), SamplingConfig{});
  EXPECT_LE(*c.values.rho_c, c.values.gamma_c + 1e-9);
  EXPECT_LE(*c.values.rho_c, c.gamma_c_pairs + 1e-9);
  EXPECT_LE(c.gamma_c_pairs, c.values.gamma_c * (1 + 1e-6) + 1e-9);
  EXPECT_GE(c.values.gamma_c, 0.0);
  EXPECT_GE(*c.values.beta, 0.0);
  EXPECT_GE(*c.values.big_m, 0.0);
}

TEST_P(ConstantProperties, WitnessesInsideRegion) {
  const SystemSpec s = load_benchmark(GetParam());
  const ConstantEstimates c = estimate_constants(s, small_config());
  for (const auto& [name, w] : c.witnesses) {
    EXPECT_TRUE(s.region().contains(w.x1)) << name;
    if (!w.x2.empty()) EXPECT_TRUE(s.region().contains(w.x2)) << name;
    EXPECT_TRUE(s.input_region().contains(w.u)) << name;
  }
}

TEST_P(ConstantProperties, DeterministicAcrossThreadCounts) {
  const SystemSpec s = load_benchmark(GetParam());
  SamplingConfig cfg = small_config();
  cfg.threads = 1;
  const ConstantEstimates ref = estimate_constants(s, cfg);
  for (unsigned threads : {2u, 3u, 8u}) {
    cfg.threads = threads;
    const ConstantEstimates c = estimate_constants(s, cfg);
    EXPECT_EQ(c.values.gamma_c, ref.values.gamma_c);
    EXPECT_EQ(c.values.rho_c, ref.values.rho_c);
    EXPECT_EQ(c.values.beta, ref.values.beta);
    EXPECT_EQ(c.values.big_m, ref.values.big_m);
    EXPECT_EQ(c.gamma_c_pairs, ref.gamma_c_pairs);
    for (const auto& [name, w] : ref.witnesses) {
      EXPECT_EQ(c.witnesses.at(name).x1, w.x1) << name;
      EXPECT_EQ(c.witnesses.at(name).x2, w.x2) << name;
    }
  }
}

TEST_P(ConstantProperties, GridRefinementNeverDecreases) {
  const SystemSpec s = load_benchmark(GetParam());
  SamplingConfig coarse = small_config();
  coarse.grid_per_axis = 11;
  SamplingConfig fine = coarse;
  fine.grid_per_axis = 21;  // contains every coarse node
  const ConstantEstimates a = estimate_constants(s, coarse);
  const ConstantEstimates b = estimate_constants(s, fine);
  EXPECT_GE(b.values.gamma_c, a.values.gamma_c - 1e-12);
  EXPECT_GE(*b.values.beta, *a.values.beta - 1e-12);
  EXPECT_GE(*b.values.big_m, *a.values.big_m - 1e-12);
}

TEST_P(ConstantProperties, ShrinkingRegionNeverIncreasesGridEstimates) {
  const SystemSpec s = load_benchmark(GetParam());
  const SamplingConfig cfg = small_config();
  BoxRegion inner = s.region();
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    inner.lower[i] *= 0.5;
    inner.upper[i] *= 0.5;
  }
  const ConstantEstimates outer_c = estimate_constants(s, cfg);
  const ConstantEstimates inner_c = estimate_constants(s.with_region(inner), cfg);
  EXPECT_LE(inner_c.values.gamma_c, outer_c.values.gamma_c + 1e-12);
  EXPECT_LE(*inner_c.values.beta, *outer_c.values.beta + 1e-12);
  EXPECT_LE(*inner_c.values.big_m, *outer_c.values.big_m + 1e-12);
}

TEST_P(ConstantProperties, OneSidedOnNestedPairSubset) {
  const SystemSpec s = load_benchmark(GetParam());
  const SamplingConfig cfg = small_config();
  BoxRegion inner = s.region();
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    inner.lower[i] *= 0.5;
    inner.upper[i] *= 0.5;
  }
  const auto pairs = generate_pairs(s, cfg);
  std::vector<SamplePair> kept;
  for (const auto& p : pairs)
    if (inner.contains(p.x1) && inner.contains(p.x2)) kept.push_back(p);
  ASSERT_GT(kept.size(), 10u);
  const SystemSpec small = s.with_region(inner);
  EXPECT_LE(estimate_rho_c(small, kept, cfg).value, estimate_rho_c(s, pairs, cfg).value + 1e-12);
  EXPECT_LE(estimate_gamma_c_pairs(small, kept, cfg).value,
            estimate_gamma_c_pairs(s, pairs, cfg).value + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Benchmarks, ConstantProperties,
                         ::testing::ValuesIn(test::benchmark_names()));

TEST(CubicBenchmark, KnownValues) {
  const ConstantEstimates c = estimate_constants(load_benchmark("cubic-scalar"), SamplingConfig{});
  EXPECT_NEAR(*c.values.rho_c, 0.0, 1e-3);
  EXPECT_NEAR(c.values.gamma_c, 12.0, 1e-2);
  EXPECT_NEAR(c.values.sigma_bar_a, 1.0, 1e-15);
}

TEST(Sampling, PairSetIsSeeded) {
  const SystemSpec s = load_benchmark("van-der-pol");
  SamplingConfig cfg = small_config();
  const auto a = generate_pairs(s, cfg);
  const auto b = generate_pairs(s, cfg);
  ASSERT_EQ(a.size(), cfg.pair_budget);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x1, b[i].x1);
    EXPECT_EQ(a[i].x2, b[i].x2);
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_TRUE(s.region().contains(a[i].x1));
    EXPECT_TRUE(s.region().contains(a[i].x2));
  }
  cfg.seed = 43;
  EXPECT_NE(generate_pairs(s, cfg)[0].x1, a[0].x1);
}

TEST(Sampling, ConfigValidation) {
  const SystemSpec s = load_benchmark("pendulum");
  SamplingConfig cfg;
  cfg.pair_budget = 999;
  EXPECT_THROW(generate_pairs(s, cfg), ArgumentError);
  cfg = SamplingConfig{};
  cfg.grid_per_axis = 1;
  EXPECT_THROW(estimate_gamma_c(s, cfg), ArgumentError);
}

TEST(Sampling, GridCapRespected) {
  const SystemSpec s = make_spec(Matrix::identity(4), {"x1", "x2", "x3", "x4"});
  SamplingConfig cfg;
  cfg.grid_per_axis = 101;
  cfg.max_grid_points = 10000;
  std::size_t total = 1;
  for (std::size_t g : grid_shape(s, cfg)) total *= g;
  EXPECT_LE(total, cfg.max_grid_points);
  EXPECT_GE(total, 2u * 2 * 2 * 2);
}

TEST(Sampling, DegenerateAxisUsesOneNode) {
  const SystemSpec s = make_spec(Matrix{{0}}, {"x1"}, 0.5, 0.5);
  EXPECT_EQ(grid_shape(s, SamplingConfig{}), std::vector<std::size_t>{1});
}

TEST(Sampling, FailureRateThreshold) {
  // The derivative of sqrt(x1) fails on the negative half of [-1, 1].
  const SystemSpec bad = make_spec(Matrix{{0}}, {"sqrt(x1)"});
  EXPECT_THROW(estimate_gamma_c(bad, small_config()), NumericalError);
  // Fails only at x1 = 0, a single mesh node.
  const SystemSpec ok = make_spec(Matrix{{0}}, {"x1^2/x1"}, -1, 1);
  const SupEstimate g = estimate_gamma_c(ok, small_config());
  EXPECT_GT(g.skipped, 0u);
  EXPECT_NEAR(g.value, 1.0, 1e-12);
}

TEST(Sampling, ThreadCapFromEnvironment) {
  setenv("LIPDISC_THREADS", "2", 1);
  EXPECT_EQ(resolve_threads(8), 2u);
  EXPECT_EQ(resolve_threads(1), 1u);
  setenv("LIPDISC_THREADS", "junk", 1);
  EXPECT_EQ(resolve_threads(3), 3u);
  unsetenv("LIPDISC_THREADS");
  EXPECT_EQ(resolve_threads(5), 5u);
}

}  // namespace
}  // namespace lipdisc
