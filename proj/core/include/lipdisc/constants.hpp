#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipdisc/sampling.hpp"
#include "lipdisc/system.hpp"

namespace lipdisc {

// The continuous-time quantities the discrete bound formulas consume.
// rho_c, beta and big_m are optional so callers can supply only what a
// given formula needs.
struct ContinuousConstants {
  double gamma_c = 0.0;      // sup |df/dx| (induced 2-norm) over D x U
  double sigma_bar_a = 0.0;  // max singular value of A
  std::optional<double> rho_c;  // one-sided Lipschitz constant, any sign
  std::optional<double> beta;   // sup |d2f/dx2| (tensor surrogate norm)
  std::optional<double> big_m;  // sup |f|
};

// Empirical suprema with witnesses. Every value is a lower bound on the
// true supremum (sampling cannot certify upper bounds).
struct ConstantEstimates {
  ContinuousConstants values;
  // Pair-quotient estimate of gamma_c on the shared pair set; a cross-check
  // for the Jacobian-norm grid estimate.
  double gamma_c_pairs = 0.0;
  // Keys: "gamma_c", "gamma_c_pairs", "rho_c", "beta", "big_m".
  std::map<std::string, Witness> witnesses;
  SamplingConfig config;
  std::vector<std::size_t> grid_shape;
  std::size_t pair_count = 0;
  std::size_t skipped = 0;
};

// max over the D x U mesh (plus polish) of sigma_max(df/dx).
SupEstimate estimate_gamma_c(const SystemSpec& spec, const SamplingConfig& cfg);

// sup of <f(x1,u) - f(x2,u), x1 - x2> / |x1 - x2|^2 over the shared pair set.
SupEstimate estimate_rho_c(const SystemSpec& spec, const SamplingConfig& cfg);
SupEstimate estimate_rho_c(const SystemSpec& spec, std::span<const SamplePair> pairs,
                           const SamplingConfig& cfg);

// sup of |f(x1,u) - f(x2,u)| / |x1 - x2| over the shared pair set.
SupEstimate estimate_gamma_c_pairs(const SystemSpec& spec, std::span<const SamplePair> pairs,
                                   const SamplingConfig& cfg);

struct BetaAndM {
  SupEstimate beta;
  SupEstimate big_m;
};
BetaAndM estimate_beta_and_m(const SystemSpec& spec, const SamplingConfig& cfg);

// All of the above plus sigma_bar(A).
ConstantEstimates estimate_constants(const SystemSpec& spec, const SamplingConfig& cfg);

}  // namespace lipdisc
