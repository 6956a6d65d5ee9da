#include "lipdisc/verify.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <string>

#include "lipdisc/error.hpp"

namespace lipdisc {

SupEstimate empirical_lipschitz(const DiscreteModel& model, std::span<const SamplePair> pairs,
                                const SamplingConfig& cfg) {
  return pair_sup(pairs, cfg, [&](const SamplePair& p) -> std::optional<double> {
    const Vector dx = p.x1 - p.x2;
    const double ndx = norm2(dx);
    if (ndx == 0.0) return std::nullopt;
    const Vector dF = model.nonlinear(p.x1, p.u) - model.nonlinear(p.x2, p.u);
    return norm2(dF) / ndx;
  });
}

SupEstimate empirical_lipschitz(const DiscreteModel& model, const SamplingConfig& cfg) {
  const std::vector<SamplePair> pairs = generate_pairs(model.spec(), cfg);
  return empirical_lipschitz(model, pairs, cfg);
}

SupEstimate empirical_one_sided(const DiscreteModel& model, std::span<const SamplePair> pairs,
                                const SamplingConfig& cfg) {
  return pair_sup(pairs, cfg, [&](const SamplePair& p) -> std::optional<double> {
    const Vector dx = p.x1 - p.x2;
    const double dd = dot(dx, dx);
    if (dd == 0.0) return std::nullopt;
    const Vector dF = model.nonlinear(p.x1, p.u) - model.nonlinear(p.x2, p.u);
    return dot(dF, dx) / dd;
  });
}

SupEstimate empirical_one_sided(const DiscreteModel& model, const SamplingConfig& cfg) {
  const std::vector<SamplePair> pairs = generate_pairs(model.spec(), cfg);
  return empirical_one_sided(model, pairs, cfg);
}

SupEstimate empirical_full_map_lipschitz(const DiscreteModel& model,
                                         std::span<const SamplePair> pairs,
                                         const SamplingConfig& cfg) {
  return pair_sup(pairs, cfg, [&](const SamplePair& p) -> std::optional<double> {
    const Vector dx = p.x1 - p.x2;
    const double ndx = norm2(dx);
    if (ndx == 0.0) return std::nullopt;
    return norm2(model.step(p.x1, p.u) - model.step(p.x2, p.u)) / ndx;
  });
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void settle(BoundCheck& check) {
  if (!check.formula) {
    check.pass = true;
    return;
  }
  check.margin = *check.formula - check.empirical.value;
  check.tolerance = verify_tolerance(*check.formula);
  check.pass = check.margin >= -check.tolerance;
}

}  // namespace

VerificationReport verify_bounds(const SystemSpec& spec, int order, const SamplingConfig& cfg,
                                 Order3Form form) {
  VerificationReport r;
  r.system = spec.name();
  r.order = order;
  r.t = spec.sampling_time();
  r.order3_form = form;
  r.config = cfg;
  r.warnings = spec.warnings();
  r.timestamp = utc_timestamp();

  if (order < 1 || order > 3) {
    throw ArgumentError("unsupported order " + std::to_string(order) + " (expected 1, 2 or 3)");
  }

  try {
    r.constants = estimate_constants(spec, cfg);
  } catch (const NumericalError& e) {
    r.errors.push_back(std::string("constants: ") + e.what());
    r.gamma.pass = false;
    r.rho.pass = false;
    return r;
  }

  TaylorOptions options;
  options.order3_form = form;
  const DiscreteModel model = build_taylor_model(spec, order, options);
  const std::vector<SamplePair> pairs = generate_pairs(spec, cfg);

  try {
    r.gamma.formula = gamma_d(order, r.t, r.constants.values);
    r.gamma.empirical = empirical_lipschitz(model, pairs, cfg);
    settle(r.gamma);
  } catch (const NumericalError& e) {
    r.errors.push_back(std::string("gamma_d: ") + e.what());
    r.gamma.pass = false;
  }

  try {
    if (order < 3) r.rho.formula = rho_d(order, r.t, r.constants.values);
    r.rho.empirical = empirical_one_sided(model, pairs, cfg);
    settle(r.rho);
  } catch (const NumericalError& e) {
    r.errors.push_back(std::string("rho_d: ") + e.what());
    r.rho.pass = false;
  }

  try {
    r.full_map_gamma = empirical_full_map_lipschitz(model, pairs, cfg);
  } catch (const NumericalError& e) {
    r.errors.push_back(std::string("full map: ") + e.what());
  }
  return r;
}

double log_log_slope(std::span<const double> t, std::span<const double> errors) {
  const std::size_t n = t.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(errors[i] > 0.0)) return std::nan("");
    const double lx = std::log(t[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

ConvergenceStudy convergence_study(const SystemSpec& spec, std::span<const int> orders,
                                   std::span<const double> t_values,
                                   const ConvergenceOptions& options) {
  if (t_values.size() < 3) throw ArgumentError("convergence study needs at least 3 T values");
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("T values must be positive");
  }
  const double ratio = t_values[1] / t_values[0];
  if (std::fabs(ratio - 1.0) < 1e-12) throw ArgumentError("T values must be distinct");
  for (std::size_t i = 1; i < t_values.size(); ++i) {
    const double r = t_values[i] / t_values[i - 1];
    if (std::fabs(r - ratio) > 1e-9 * std::fabs(ratio)) {
      throw ArgumentError("T values must be geometrically spaced");
    }
  }
  for (int k : orders) {
    if (k < 1 || k > 3) throw ArgumentError("unsupported order " + std::to_string(k));
  }
  if (options.sample_points == 0) throw ArgumentError("need at least one sample point");

  // Seeded sample from the central half of D (and all of U).
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BoxRegion& d = spec.region();
  const BoxRegion& ubox = spec.input_region();
  std::vector<Vector> xs;
  std::vector<Vector> us;
  for (std::size_t p = 0; p < options.sample_points; ++p) {
    Vector x(d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) {
      const double c = 0.5 * (d.lower[i] + d.upper[i]);
      x[i] = c + 0.5 * d.width(i) * (unit(rng) - 0.5);
    }
    Vector u(ubox.dim());
    for (std::size_t i = 0; i < ubox.dim(); ++i) u[i] = ubox.lower[i] + ubox.width(i) * unit(rng);
    xs.push_back(std::move(x));
    us.push_back(std::move(u));
  }

  ConvergenceStudy study;
  study.system = spec.name();
  study.t_values.assign(t_values.begin(), t_values.end());
  study.sample_points = options.sample_points;
  study.integrator_tol = options.integrator_tol;

  // exact[j][p]: reference step at t_values[j] from sample p.
  std::vector<std::vector<Vector>> exact(t_values.size());
  for (std::size_t j = 0; j < t_values.size(); ++j) {
    for (std::size_t p = 0; p < xs.size(); ++p) {
      exact[j].push_back(exact_step(spec, xs[p], us[p], options.integrator_tol, t_values[j]));
    }
  }

  for (int k : orders) {
    ConvergenceRow row;
    row.order = k;
    for (std::size_t j = 0; j < t_values.size(); ++j) {
      const DiscreteModel model = build_taylor_model(
          spec, k, {.sampling_time = t_values[j], .order3_form = options.order3_form});
      double worst = 0.0;
      for (std::size_t p = 0; p < xs.size(); ++p) {
        worst = std::max(worst, norm2(exact[j][p] - model.step(xs[p], us[p])));
      }
      row.max_errors.push_back(worst);
    }
    row.slope = log_log_slope(study.t_values, row.max_errors);
    study.rows.push_back(std::move(row));
  }
  return study;
}

}  // namespace lipdisc
