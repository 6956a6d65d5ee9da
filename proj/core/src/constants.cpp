#include "lipdisc/constants.hpp"

#include <cmath>

#include "lipdisc/linalg.hpp"

namespace lipdisc {

SupEstimate estimate_gamma_c(const SystemSpec& spec, const SamplingConfig& cfg) {
  if (spec.linear()) {
    // Jacobian is identically zero; skip the sweep.
    SupEstimate s;
    s.value = 0.0;
    s.witness.x1 = spec.region().center();
    s.witness.u = spec.input_region().center();
    return s;
  }
  return grid_sup(spec, cfg, [&](std::span<const double> x, std::span<const double> u) {
    return std::optional<double>(max_singular_value(spec.jacobian(x, u)));
  });
}

SupEstimate estimate_rho_c(const SystemSpec& spec, std::span<const SamplePair> pairs,
                           const SamplingConfig& cfg) {
  return pair_sup(pairs, cfg, [&](const SamplePair& p) -> std::optional<double> {
    const Vector dx = p.x1 - p.x2;
    const double dd = dot(dx, dx);
    if (dd == 0.0) return std::nullopt;
    const Vector df = spec.eval_f(p.x1, p.u) - spec.eval_f(p.x2, p.u);
    return dot(df, dx) / dd;
  });
}

SupEstimate estimate_rho_c(const SystemSpec& spec, const SamplingConfig& cfg) {
  const std::vector<SamplePair> pairs = generate_pairs(spec, cfg);
  return estimate_rho_c(spec, pairs, cfg);
}

SupEstimate estimate_gamma_c_pairs(const SystemSpec& spec, std::span<const SamplePair> pairs,
                                   const SamplingConfig& cfg) {
  return pair_sup(pairs, cfg, [&](const SamplePair& p) -> std::optional<double> {
    const Vector dx = p.x1 - p.x2;
    const double ndx = norm2(dx);
    if (ndx == 0.0) return std::nullopt;
    const Vector df = spec.eval_f(p.x1, p.u) - spec.eval_f(p.x2, p.u);
    return norm2(df) / ndx;
  });
}

BetaAndM estimate_beta_and_m(const SystemSpec& spec, const SamplingConfig& cfg) {
  BetaAndM out;
  if (spec.linear()) {
    for (SupEstimate* s : {&out.beta, &out.big_m}) {
      s->value = 0.0;
      s->witness.x1 = spec.region().center();
      s->witness.u = spec.input_region().center();
    }
    return out;
  }
  out.beta = grid_sup(spec, cfg, [&](std::span<const double> x, std::span<const double> u) {
    return std::optional<double>(tensor3_norm_surrogate(spec.second_derivative(x, u)));
  });
  out.big_m = grid_sup(spec, cfg, [&](std::span<const double> x, std::span<const double> u) {
    return std::optional<double>(norm2(spec.eval_f(x, u)));
  });
  return out;
}

ConstantEstimates estimate_constants(const SystemSpec& spec, const SamplingConfig& cfg) {
  ConstantEstimates c;
  c.config = cfg;
  c.grid_shape = grid_shape(spec, cfg);

  const SupEstimate gamma = estimate_gamma_c(spec, cfg);
  const std::vector<SamplePair> pairs = generate_pairs(spec, cfg);
  const SupEstimate rho = estimate_rho_c(spec, pairs, cfg);
  const SupEstimate gamma_pairs = estimate_gamma_c_pairs(spec, pairs, cfg);
  const BetaAndM bm = estimate_beta_and_m(spec, cfg);

  c.values.gamma_c = gamma.value;
  c.values.sigma_bar_a = max_singular_value(spec.a());
  c.values.rho_c = rho.value;
  c.values.beta = bm.beta.value;
  c.values.big_m = bm.big_m.value;
  c.gamma_c_pairs = gamma_pairs.value;

  c.witnesses["gamma_c"] = gamma.witness;
  c.witnesses["gamma_c_pairs"] = gamma_pairs.witness;
  c.witnesses["rho_c"] = rho.witness;
  c.witnesses["beta"] = bm.beta.witness;
  c.witnesses["big_m"] = bm.big_m.witness;

  c.pair_count = pairs.size();
  c.skipped = gamma.skipped + rho.skipped + gamma_pairs.skipped + bm.beta.skipped +
              bm.big_m.skipped;
  return c;
}

}  // namespace lipdisc
