#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lipdisc/bounds.hpp"
#include "lipdisc/constants.hpp"
#include "lipdisc/discretize.hpp"
#include "lipdisc/error.hpp"
#include "lipdisc/io.hpp"
#include "lipdisc/verify.hpp"

namespace lipdisc::cli {

namespace {

struct Options {
  std::string spec_path;
  std::string out_path;
  int order = 3;
  std::uint64_t seed = 42;
  std::size_t pairs = 20000;
  std::size_t grid = 21;
  int polish = 40;
  double tol = 1e-10;
  std::optional<double> sampling_time;
  std::string order3_form = "taylor-lie";

  std::string x0;
  std::string inputs;
  std::optional<std::size_t> steps;
  bool exact = false;

  std::string orders = "1,2,3";
  std::string t_list = "0.2,0.1,0.05,0.025";
  std::size_t samples = 16;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  if (text.empty()) return values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    if (!item.empty() && item.front() == '+') item.erase(0, 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() ||
        !std::isfinite(v)) {
      throw ArgumentError(flag + ": '" + text + "' is not a comma-separated list of numbers");
    }
    values.push_back(v);
    pos = comma + 1;
  }
  return values;
}

SamplingConfig sampling_config(const Options& o) {
  SamplingConfig cfg;
  cfg.seed = o.seed;
  cfg.pair_budget = o.pairs;
  cfg.grid_per_axis = o.grid;
  cfg.polish_iters = o.polish;
  return cfg;
}

Order3Form parse_form(const std::string& text) {
  const auto form = order3_form_from_string(text);
  if (!form) throw ArgumentError("--order3-form: expected 'taylor-lie' or 'display'");
  return *form;
}

SystemSpec load_spec(const Options& o) {
  SystemSpec spec = load_system_spec(o.spec_path);
  if (o.sampling_time) spec = spec.with_sampling_time(*o.sampling_time);
  return spec;
}

void emit(const Options& o, const json& j, const std::string& summary, std::ostream& out) {
  if (o.out_path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(o.out_path);
  if (!file) throw ArgumentError("--out: cannot write '" + o.out_path + "'");
  file << j.dump(2) << '\n';
  if (!file) throw ArgumentError("--out: write to '" + o.out_path + "' failed");
  out << summary << "wrote " << o.out_path << '\n';
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

void warn(const SystemSpec& spec, std::ostream& err) {
  for (const auto& w : spec.warnings()) err << "warning: " << w << '\n';
}

int cmd_constants(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load_spec(o);
  warn(spec, err);
  const SamplingConfig cfg = sampling_config(o);
  const ConstantEstimates c = estimate_constants(spec, cfg);
  json j = {{"tool", tool_info()},
            {"kind", "constants"},
            {"system", spec.name()},
            {"config", cfg},
            {"constants", c}};
  std::ostringstream s;
  s << spec.name() << ": gamma_c=" << fmt(c.values.gamma_c) << " rho_c=" << fmt(c.values.rho_c)
    << " beta=" << fmt(c.values.beta) << " M=" << fmt(c.values.big_m)
    << " sigma_bar(A)=" << fmt(c.values.sigma_bar_a) << '\n';
  emit(o, j, s.str(), out);
  return kPass;
}

int cmd_bounds(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load_spec(o);
  warn(spec, err);
  const SamplingConfig cfg = sampling_config(o);
  const ConstantEstimates c = estimate_constants(spec, cfg);
  const BoundResult b = evaluate_bounds(o.order, spec.sampling_time(), c.values);
  json j = {{"tool", tool_info()},
            {"kind", "bounds"},
            {"system", spec.name()},
            {"config", cfg},
            {"constants", c},
            {"bounds", b}};
  std::ostringstream s;
  s << spec.name() << " order " << o.order << " T=" << fmt(b.t) << ": gamma_d=" << fmt(b.gamma_d)
    << " rho_d=" << fmt(b.rho_d) << '\n';
  emit(o, j, s.str(), out);
  return kPass;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load_spec(o);
  warn(spec, err);
  const VerificationReport r =
      verify_bounds(spec, o.order, sampling_config(o), parse_form(o.order3_form));
  const json j = r;
  std::ostringstream s;
  s << r.system << " order " << r.order << " T=" << fmt(r.t) << '\n'
    << "  gamma_d formula=" << fmt(r.gamma.formula) << " empirical=" << fmt(r.gamma.empirical.value)
    << (r.gamma.pass ? " ok" : " VIOLATED") << '\n'
    << "  rho_d   formula=" << fmt(r.rho.formula) << " empirical=" << fmt(r.rho.empirical.value)
    << (r.rho.pass ? " ok" : " VIOLATED") << '\n';
  for (const auto& e : r.errors) s << "  error: " << e << '\n';
  emit(o, j, s.str(), out);
  if (!r.errors.empty()) {
    for (const auto& e : r.errors) err << "error: " << e << '\n';
    return kNumericalFailure;
  }
  return r.all_pass() ? kPass : kBoundViolation;
}

std::vector<Vector> load_inputs(const Options& o, const SystemSpec& spec, std::size_t& steps) {
  const std::size_t m = spec.input_dim();
  std::vector<Vector> inputs;
  if (!o.inputs.empty() && std::filesystem::is_regular_file(o.inputs)) {
    std::ifstream in(o.inputs);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ArgumentError("--inputs: malformed JSON: " + std::string(e.what()));
    }
    if (!j.is_array()) throw ArgumentError("--inputs: expected a JSON array of input vectors");
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_array()) throw ArgumentError("--inputs[" + std::to_string(k) + "]: expected an array");
      Vector u;
      for (const auto& v : j[k]) {
        if (!v.is_number()) throw ArgumentError("--inputs[" + std::to_string(k) + "]: expected numbers");
        u.push_back(v.get<double>());
      }
      if (u.size() != m) {
        throw ArgumentError("--inputs[" + std::to_string(k) + "]: expected " + std::to_string(m) +
                            " entries, got " + std::to_string(u.size()));
      }
      inputs.push_back(std::move(u));
    }
    if (!o.steps) {
      steps = inputs.size();
    } else if (*o.steps > inputs.size()) {
      throw ArgumentError("--steps " + std::to_string(*o.steps) + " exceeds the " +
                          std::to_string(inputs.size()) + " inputs in '" + o.inputs + "'");
    } else {
      steps = *o.steps;
    }
    inputs.resize(steps);
    return inputs;
  }

  Vector u = parse_list(o.inputs, "--inputs");
  if (u.empty()) u.assign(m, 0.0);
  if (u.size() != m) {
    throw ArgumentError("--inputs: expected " + std::to_string(m) + " entries, got " +
                        std::to_string(u.size()));
  }
  steps = o.steps.value_or(10);
  inputs.assign(steps, u);
  return inputs;
}

int cmd_discretize(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load_spec(o);
  warn(spec, err);
  TaylorOptions topt;
  topt.order3_form = parse_form(o.order3_form);
  const DiscreteModel model = build_taylor_model(spec, o.order, topt);

  Vector x0 = parse_list(o.x0, "--x0");
  if (x0.empty()) x0 = spec.region().center();
  if (x0.size() != spec.state_dim()) {
    throw ArgumentError("--x0: expected " + std::to_string(spec.state_dim()) + " entries, got " +
                        std::to_string(x0.size()));
  }
  std::size_t steps = 0;
  const std::vector<Vector> inputs = load_inputs(o, spec, steps);

  const Trajectory traj = simulate(
      [&](std::span<const double> x, std::span<const double> u) { return model.step(x, u); },
      spec, x0, inputs);
  json j = {{"tool", tool_info()},
            {"kind", "trajectory"},
            {"system", spec.name()},
            {"order", o.order},
            {"T", spec.sampling_time()},
            {"order3_form", std::string(to_string(model.order3_form()))},
            {"x0", x0},
            {"inputs", inputs},
            {"trajectory", traj}};

  std::ostringstream s;
  s << spec.name() << " order " << o.order << ": " << steps << " steps, x_N = [";
  for (std::size_t i = 0; i < traj.states.back().size(); ++i) {
    s << (i ? ", " : "") << fmt(traj.states.back()[i]);
  }
  s << "]\n";
  if (traj.first_exit) s << "  left the region at step " << *traj.first_exit << '\n';

  if (o.exact) {
    const Trajectory ref = simulate(
        [&](std::span<const double> x, std::span<const double> u) {
          return exact_step(spec, x, u, o.tol);
        },
        spec, x0, inputs);
    std::vector<double> errors;
    errors.reserve(ref.states.size());
    for (std::size_t k = 0; k < ref.states.size(); ++k) {
      errors.push_back(norm2(traj.states[k] - ref.states[k]));
    }
    j["exact"] = {{"integrator_tol", o.tol}, {"trajectory", ref}, {"errors", errors}};
    s << "  max error vs exact: " << fmt(*std::max_element(errors.begin(), errors.end())) << '\n';
  }
  emit(o, j, s.str(), out);
  return kPass;
}

int cmd_convergence(const Options& o, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load_spec(o);
  warn(spec, err);
  std::vector<int> orders;
  for (double v : parse_list(o.orders, "--orders")) {
    if (v != std::floor(v)) throw ArgumentError("--orders: orders must be integers");
    orders.push_back(static_cast<int>(v));
  }
  const std::vector<double> t_values = parse_list(o.t_list, "--t-list");
  ConvergenceOptions copt;
  copt.seed = o.seed;
  copt.sample_points = o.samples;
  copt.integrator_tol = o.tol;
  copt.order3_form = parse_form(o.order3_form);
  const ConvergenceStudy study = convergence_study(spec, orders, t_values, copt);
  const json j = study;
  std::ostringstream s;
  s << spec.name() << " convergence\n";
  for (const auto& row : study.rows) {
    s << "  order " << row.order << ": slope " << fmt(row.slope) << " (expected "
      << row.order + 1 << ")\n";
  }
  emit(o, j, s.str(), out);
  return kPass;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("spec", o.spec_path, "System spec JSON file")->required();
  cmd->add_option("--out", o.out_path, "Write JSON here and print a summary instead");
  cmd->add_option("-T,--sampling-time", o.sampling_time, "Override the spec's sampling time");
}

void add_sampling(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "RNG seed for the pair set")->capture_default_str();
  cmd->add_option("--pairs", o.pairs, "Pair budget (>= 1000)")->capture_default_str();
  cmd->add_option("--grid", o.grid, "Mesh nodes per axis")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
  cmd->add_option("--polish", o.polish, "Coordinate-ascent polish iterations")
      ->capture_default_str()
      ->check(CLI::Range(0, 1000));
}

void add_order(CLI::App* cmd, Options& o) {
  cmd->add_option("--order", o.order, "Taylor order")
      ->capture_default_str()
      ->check(CLI::Range(1, 3));
}

void add_form(CLI::App* cmd, Options& o) {
  cmd->add_option("--order3-form", o.order3_form, "taylor-lie or display")
      ->capture_default_str()
      ->check(CLI::IsMember({"taylor-lie", "display"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taylor-Lie discretization and discrete Lipschitz bounds", "lipdisc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(LIPDISC_VERSION));

  Options o;
  auto* constants = app.add_subcommand("constants", "Estimate continuous constants");
  add_common(constants, o);
  add_sampling(constants, o);

  auto* bounds = app.add_subcommand("bounds", "Evaluate the discrete bound formulas");
  add_common(bounds, o);
  add_sampling(bounds, o);
  add_order(bounds, o);

  auto* verify = app.add_subcommand("verify", "Check the formulas against the discrete map");
  add_common(verify, o);
  add_sampling(verify, o);
  add_order(verify, o);
  add_form(verify, o);

  auto* discretize = app.add_subcommand("discretize", "Iterate the discrete map");
  add_common(discretize, o);
  add_order(discretize, o);
  add_form(discretize, o);
  discretize->add_option("--x0", o.x0, "Initial state, comma-separated (default: center of D)");
  discretize->add_option("--inputs", o.inputs,
                         "JSON file with one input vector per step, or a constant input");
  discretize->add_option("--steps", o.steps, "Number of steps (default 10)");
  discretize->add_flag("--exact", o.exact, "Add the integrated reference trajectory");
  discretize->add_option("--tol", o.tol, "Integrator tolerance")
      ->check(CLI::Range(1e-13, 1e-6))
      ->capture_default_str();

  auto* convergence = app.add_subcommand("convergence", "Local error slopes against T");
  add_common(convergence, o);
  add_form(convergence, o);
  convergence->add_option("--orders", o.orders, "Orders, comma-separated")->capture_default_str();
  convergence->add_option("--t-list", o.t_list, "Sampling times, comma-separated")
      ->capture_default_str();
  convergence->add_option("--seed", o.seed, "RNG seed for sample points")->capture_default_str();
  convergence->add_option("--samples", o.samples, "Sample points")->capture_default_str();
  convergence->add_option("--tol", o.tol, "Integrator tolerance")
      ->check(CLI::Range(1e-13, 1e-6))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*constants) return cmd_constants(o, out, err);
    if (*bounds) return cmd_bounds(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
    if (*discretize) return cmd_discretize(o, out, err);
    return cmd_convergence(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.category() == Error::Category::kInput ? kInputError : kNumericalFailure;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace lipdisc::cli
