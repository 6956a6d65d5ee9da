#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "lipdisc/constants.hpp"
#include "lipdisc/discretize.hpp"
#include "lipdisc/expr.hpp"
#include "lipdisc/io.hpp"
#include "lipdisc/linalg.hpp"

namespace {

using namespace lipdisc;

SystemSpec benchmark_spec(const std::string& name) {
  return load_system_spec(std::string(LIPDISC_BENCH_DATA_DIR) + "/benchmarks/" + name + ".json");
}

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = normal(rng);
  return a;
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_expression("u1 - x1^2*x2 + sin(x1)*exp(-x2/3)"));
  }
}
BENCHMARK(BM_Parse);

void BM_Expm(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a, 0.1));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(6)->Arg(16);

void BM_SigmaBar(benchmark::State& state) {
  const Matrix a = random_matrix(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(max_singular_value(a));
}
BENCHMARK(BM_SigmaBar)->Arg(2)->Arg(6)->Arg(16);

void BM_ModelStep(benchmark::State& state) {
  const SystemSpec s = benchmark_spec("van-der-pol");
  const DiscreteModel m = build_taylor_model(s, static_cast<int>(state.range(0)));
  Vector x{0.3, -0.2};
  const Vector u{0.1};
  for (auto _ : state) benchmark::DoNotOptimize(m.step(x, u));
}
BENCHMARK(BM_ModelStep)->DenseRange(1, 3);

void BM_ExactStep(benchmark::State& state) {
  const SystemSpec s = benchmark_spec("pendulum");
  const Vector x{0.5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(exact_step(s, x, {}, 1e-10));
}
BENCHMARK(BM_ExactStep);

void BM_Constants(benchmark::State& state) {
  const SystemSpec s = benchmark_spec("pendulum");
  SamplingConfig cfg;
  cfg.pair_budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_constants(s, cfg));
}
BENCHMARK(BM_Constants)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
