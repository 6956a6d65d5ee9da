#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lipdisc/linalg.hpp"
#include "lipdisc/system.hpp"

namespace lipdisc {

// Sample budget shared by the continuous estimators and the empirical
// discrete checks.
struct SamplingConfig {
  std::size_t grid_per_axis = 21;  // mesh nodes per axis, endpoints included
  std::size_t max_grid_points = 1'000'000;
  std::size_t pair_budget = 20'000;  // half wide pairs, half near-coincident
  std::uint64_t seed = 42;
  int polish_iters = 40;
  double near_epsilon = 1e-5;
  unsigned threads = 0;  // 0: hardware concurrency (capped by LIPDISC_THREADS)
};

// Where a supremum estimate was attained. x2 is empty for single-point
// objectives (Jacobian norm, |f|, ...).
struct Witness {
  Vector x1;
  Vector x2;
  Vector u;
};

// Empirical supremum: a lower bound on the true supremum.
struct SupEstimate {
  double value = -std::numeric_limits<double>::infinity();
  Witness witness;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // points/pairs whose evaluation raised EvalError
};

struct SamplePair {
  Vector x1;
  Vector x2;
  Vector u;
};

// nullopt means "not applicable at this sample" (e.g. x1 == x2) and is not
// counted as a failure. EvalError thrown by an objective is counted in
// SupEstimate::skipped; more than 10% failures raises NumericalError.
using PointObjective =
    std::function<std::optional<double>(std::span<const double> x, std::span<const double> u)>;
using PairObjective = std::function<std::optional<double>(const SamplePair& pair)>;

// Worker count after applying the LIPDISC_THREADS cap.
unsigned resolve_threads(unsigned requested);

// Mesh nodes per axis actually used for an (n + m)-dimensional grid once the
// max_grid_points cap is applied. Degenerate (zero-width) axes use one node.
std::vector<std::size_t> grid_shape(const SystemSpec& spec, const SamplingConfig& cfg);

// Max of `objective` over the uniform mesh on D x U, then polished by
// coordinate ascent from the best node (step halving from one mesh cell).
SupEstimate grid_sup(const SystemSpec& spec, const SamplingConfig& cfg,
                     const PointObjective& objective);

// The deterministic pair set for (spec region, cfg): pair_budget / 2 wide
// uniform pairs followed by near-coincident pairs x2 = x1 + eps v.
std::vector<SamplePair> generate_pairs(const SystemSpec& spec, const SamplingConfig& cfg);

SupEstimate pair_sup(std::span<const SamplePair> pairs, const SamplingConfig& cfg,
                     const PairObjective& objective);

}  // namespace lipdisc
