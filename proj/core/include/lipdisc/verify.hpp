#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipdisc/bounds.hpp"
#include "lipdisc/constants.hpp"
#include "lipdisc/discretize.hpp"
#include "lipdisc/sampling.hpp"

namespace lipdisc {

// sup |F_T(x1,u) - F_T(x2,u)| / |x1 - x2| over the shared pair set. Only
// the nonlinear part F_T is measured; A_d is accounted for by sigma_bar(A).
SupEstimate empirical_lipschitz(const DiscreteModel& model, const SamplingConfig& cfg);
SupEstimate empirical_lipschitz(const DiscreteModel& model, std::span<const SamplePair> pairs,
                                const SamplingConfig& cfg);

// sup <F_T(x1,u) - F_T(x2,u), x1 - x2> / |x1 - x2|^2.
SupEstimate empirical_one_sided(const DiscreteModel& model, const SamplingConfig& cfg);
SupEstimate empirical_one_sided(const DiscreteModel& model, std::span<const SamplePair> pairs,
                                const SamplingConfig& cfg);

// Same quotient for the full map A_d x + F_T (informational).
SupEstimate empirical_full_map_lipschitz(const DiscreteModel& model,
                                         std::span<const SamplePair> pairs,
                                         const SamplingConfig& cfg);

// Absolute plus relative slack applied when comparing a formula constant to
// its empirical counterpart.
inline double verify_tolerance(double formula) { return 1e-9 + 1e-6 * std::abs(formula); }

struct BoundCheck {
  std::optional<double> formula;  // absent when no formula exists (rho at order 3)
  SupEstimate empirical;
  double margin = 0.0;     // formula - empirical
  double tolerance = 0.0;  // verify_tolerance(formula)
  bool pass = true;        // margin >= -tolerance
};

struct VerificationReport {
  std::string system;
  int order = 1;
  double t = 0.0;
  Order3Form order3_form = Order3Form::kTaylorLie;
  SamplingConfig config;
  ConstantEstimates constants;
  BoundCheck gamma;
  BoundCheck rho;
  SupEstimate full_map_gamma;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  std::string timestamp;  // ISO-8601 UTC, excluded from determinism checks

  bool all_pass() const { return errors.empty() && gamma.pass && rho.pass; }
};

// Estimates the continuous constants, evaluates the bound formulas, builds
// the order-k model and measures its empirical constants on the same pair
// set. Failures of individual stages are recorded in `errors`; the report
// is still returned.
VerificationReport verify_bounds(const SystemSpec& spec, int order, const SamplingConfig& cfg,
                                 Order3Form form = Order3Form::kTaylorLie);

struct ConvergenceOptions {
  std::uint64_t seed = 42;
  std::size_t sample_points = 16;
  double integrator_tol = 1e-12;
  Order3Form order3_form = Order3Form::kTaylorLie;
};

struct ConvergenceRow {
  int order = 1;
  std::vector<double> max_errors;  // one per T
  double slope = 0.0;              // least-squares slope of log error vs log T
};

struct ConvergenceStudy {
  std::string system;
  std::vector<double> t_values;
  std::vector<ConvergenceRow> rows;
  std::size_t sample_points = 0;
  double integrator_tol = 0.0;
};

// Local truncation error of each order-k map against exact_step over a
// seeded sample drawn from the central half of D. Needs at least three
// geometrically spaced T values.
ConvergenceStudy convergence_study(const SystemSpec& spec, std::span<const int> orders,
                                   std::span<const double> t_values,
                                   const ConvergenceOptions& options = {});

// Least-squares slope of log(errors) against log(t). NaN if any error is 0.
double log_log_slope(std::span<const double> t, std::span<const double> errors);

}  // namespace lipdisc
