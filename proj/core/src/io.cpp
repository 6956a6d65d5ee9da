#include "lipdisc/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lipdisc/error.hpp"

namespace lipdisc {

namespace {

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(path + "." + key, "missing required field");
  return *it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecError(path, "expected a finite number");
  return v;
}

Vector read_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_number(j[i], index_path(path, i)));
  return v;
}

Matrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = index_path(path, r);
    Vector row = read_vector(j[r], row_path);
    if (r == 0) {
      cols = row.size();
      if (cols == 0) throw SpecError(row_path, "rows must be non-empty");
    } else if (row.size() != cols) {
      throw SpecError(row_path, "expected " + std::to_string(cols) + " entries (rows must be "
                                "rectangular), got " + std::to_string(row.size()));
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(rows, cols, std::move(data));
}

BoxRegion read_box(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object with lower and upper");
  BoxRegion b;
  b.lower = read_vector(require(j, "lower", path), path + ".lower");
  b.upper = read_vector(require(j, "upper", path), path + ".upper");
  return b;
}

json vec(const Vector& v) { return json(v); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(Vector(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

double read_value(const json& j) {
  // Non-finite values serialize as null.
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.x1 = j.at("x1").get<Vector>();
  w.x2 = j.at("x2").get<Vector>();
  w.u = j.at("u").get<Vector>();
  return w;
}

SupEstimate sup_from_json(const json& j) {
  SupEstimate s;
  s.value = read_value(j.at("value"));
  s.witness = witness_from_json(j.at("witness"));
  s.evaluated = j.at("evaluated").get<std::size_t>();
  s.skipped = j.at("skipped").get<std::size_t>();
  return s;
}

SamplingConfig config_from_json(const json& j) {
  SamplingConfig c;
  c.grid_per_axis = j.at("grid_per_axis").get<std::size_t>();
  c.max_grid_points = j.at("max_grid_points").get<std::size_t>();
  c.pair_budget = j.at("pair_budget").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.polish_iters = j.at("polish_iters").get<int>();
  c.near_epsilon = j.at("near_epsilon").get<double>();
  return c;
}

}  // namespace

SystemSpec system_spec_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("$", "expected a JSON object");
  const json& name = require(j, "name", "$");
  if (!name.is_string()) throw SpecError("$.name", "expected a string");
  Matrix a = read_matrix(require(j, "A", "$"), "$.A");
  Matrix c = read_matrix(require(j, "C", "$"), "$.C");

  const json& fj = require(j, "f", "$");
  if (!fj.is_array()) throw SpecError("$.f", "expected an array of expression strings");
  std::vector<Expression> f;
  for (std::size_t i = 0; i < fj.size(); ++i) {
    const std::string path = index_path("$.f", i);
    if (!fj[i].is_string()) throw SpecError(path, "expected an expression string");
    const std::string text = fj[i].get<std::string>();
    if (text.empty()) throw SpecError(path, "expression is empty");
    try {
      f.push_back(parse_expression(text));
    } catch (const ParseError& e) {
      throw SpecError(path, e.what());
    }
  }

  BoxRegion region = read_box(require(j, "region", "$"), "$.region");
  BoxRegion input_region;
  if (auto it = j.find("input_region"); it != j.end() && !it->is_null()) {
    input_region = read_box(*it, "$.input_region");
  }
  const double t = read_number(require(j, "T", "$"), "$.T");
  return SystemSpec::create(name.get<std::string>(), std::move(a), std::move(c), std::move(f),
                            std::move(region), std::move(input_region), t);
}

SystemSpec load_system_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("$", "cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("$", std::string("malformed JSON: ") + e.what());
  }
  return system_spec_from_json(j);
}

json system_spec_to_json(const SystemSpec& spec) {
  json j;
  j["name"] = spec.name();
  j["A"] = matrix_json(spec.a());
  j["C"] = matrix_json(spec.c());
  json f = json::array();
  for (const auto& e : spec.f()) f.push_back(unparse(e));
  j["f"] = f;
  j["region"] = {{"lower", spec.region().lower}, {"upper", spec.region().upper}};
  j["input_region"] = {{"lower", spec.input_region().lower},
                       {"upper", spec.input_region().upper}};
  j["T"] = spec.sampling_time();
  return j;
}

json tool_info() { return {{"name", "lipdisc"}, {"version", LIPDISC_VERSION}}; }

void to_json(json& j, const SamplingConfig& cfg) {
  // threads is deliberately absent: output must not depend on it.
  j = {{"grid_per_axis", cfg.grid_per_axis},
       {"max_grid_points", cfg.max_grid_points},
       {"pair_budget", cfg.pair_budget},
       {"seed", cfg.seed},
       {"polish_iters", cfg.polish_iters},
       {"near_epsilon", cfg.near_epsilon}};
}

void to_json(json& j, const Witness& w) {
  j = {{"x1", vec(w.x1)}, {"x2", vec(w.x2)}, {"u", vec(w.u)}};
}

void to_json(json& j, const SupEstimate& s) {
  j = {{"value", std::isfinite(s.value) ? json(s.value) : json(nullptr)},
       {"estimate", "empirical_sup"},
       {"witness", s.witness},
       {"evaluated", s.evaluated},
       {"skipped", s.skipped}};
}

void to_json(json& j, const ConstantEstimates& c) {
  json witnesses = json::object();
  for (const auto& [name, w] : c.witnesses) witnesses[name] = w;
  j = {{"estimate", "empirical_sup (lower bound on the true supremum)"},
       {"gamma_c", c.values.gamma_c},
       {"gamma_c_pairs", c.gamma_c_pairs},
       {"rho_c", optional_number(c.values.rho_c)},
       {"beta", optional_number(c.values.beta)},
       {"big_m", optional_number(c.values.big_m)},
       {"sigma_bar_a", c.values.sigma_bar_a},
       {"witnesses", witnesses},
       {"sample_budget",
        {{"grid_shape", c.grid_shape},
         {"grid_per_axis", c.config.grid_per_axis},
         {"pairs", c.pair_count},
         {"seed", c.config.seed},
         {"polish_iters", c.config.polish_iters}}},
       {"skipped", c.skipped}};
}

void to_json(json& j, const BoundResult& b) {
  j = {{"order", b.order},
       {"T", b.t},
       {"gamma_d", b.gamma_d},
       {"rho_d", optional_number(b.rho_d)}};
}

void to_json(json& j, const VerificationReport& r) {
  j = json::object();
  j["tool"] = tool_info();
  j["kind"] = "verification_report";
  j["system"] = r.system;
  j["order"] = r.order;
  j["T"] = r.t;
  j["order3_form"] = std::string(to_string(r.order3_form));
  j["config"] = r.config;
  j["constants"] = r.constants;
  j["formula"] = {{"gamma_d", optional_number(r.gamma.formula)},
                  {"rho_d", optional_number(r.rho.formula)}};
  j["empirical"] = {{"gamma_d", r.gamma.empirical},
                    {"rho_d", r.rho.empirical},
                    {"full_map_gamma", r.full_map_gamma}};
  j["margins"] = {{"gamma_d", r.gamma.formula ? json(r.gamma.margin) : json(nullptr)},
                  {"rho_d", r.rho.formula ? json(r.rho.margin) : json(nullptr)}};
  j["tolerances"] = {{"gamma_d", r.gamma.formula ? json(r.gamma.tolerance) : json(nullptr)},
                     {"rho_d", r.rho.formula ? json(r.rho.tolerance) : json(nullptr)}};
  j["pass"] = {{"gamma_d", r.gamma.pass}, {"rho_d", r.rho.pass}, {"all", r.all_pass()}};
  j["warnings"] = r.warnings;
  j["errors"] = r.errors;
  j["timestamp"] = r.timestamp;
}

void to_json(json& j, const ConvergenceStudy& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    rows.push_back({{"order", row.order},
                    {"max_errors", row.max_errors},
                    {"slope", std::isfinite(row.slope) ? json(row.slope) : json(nullptr)},
                    {"expected_slope", row.order + 1}});
  }
  j = {{"tool", tool_info()},
       {"kind", "convergence_study"},
       {"system", s.system},
       {"T_values", s.t_values},
       {"sample_points", s.sample_points},
       {"integrator_tol", s.integrator_tol},
       {"rows", rows}};
}

void to_json(json& j, const Trajectory& t) {
  j = {{"states", t.states},
       {"outputs", t.outputs},
       {"first_exit", t.first_exit ? json(*t.first_exit) : json(nullptr)}};
}

VerificationReport verification_report_from_json(const json& j) {
  try {
    VerificationReport r;
    r.system = j.at("system").get<std::string>();
    r.order = j.at("order").get<int>();
    r.t = j.at("T").get<double>();
    const auto form = order3_form_from_string(j.at("order3_form").get<std::string>());
    if (!form) throw SpecError("$.order3_form", "unknown order-3 form");
    r.order3_form = *form;
    r.config = config_from_json(j.at("config"));

    const json& c = j.at("constants");
    r.constants.values.gamma_c = c.at("gamma_c").get<double>();
    r.constants.values.sigma_bar_a = c.at("sigma_bar_a").get<double>();
    r.constants.values.rho_c = read_optional(c.at("rho_c"));
    r.constants.values.beta = read_optional(c.at("beta"));
    r.constants.values.big_m = read_optional(c.at("big_m"));
    r.constants.gamma_c_pairs = c.at("gamma_c_pairs").get<double>();
    for (const auto& [name, w] : c.at("witnesses").items()) {
      r.constants.witnesses[name] = witness_from_json(w);
    }
    const json& budget = c.at("sample_budget");
    r.constants.grid_shape = budget.at("grid_shape").get<std::vector<std::size_t>>();
    r.constants.pair_count = budget.at("pairs").get<std::size_t>();
    r.constants.skipped = c.at("skipped").get<std::size_t>();
    r.constants.config = r.config;

    r.gamma.formula = read_optional(j.at("formula").at("gamma_d"));
    r.rho.formula = read_optional(j.at("formula").at("rho_d"));
    r.gamma.empirical = sup_from_json(j.at("empirical").at("gamma_d"));
    r.rho.empirical = sup_from_json(j.at("empirical").at("rho_d"));
    r.full_map_gamma = sup_from_json(j.at("empirical").at("full_map_gamma"));
    r.gamma.margin = read_optional(j.at("margins").at("gamma_d")).value_or(0.0);
    r.rho.margin = read_optional(j.at("margins").at("rho_d")).value_or(0.0);
    r.gamma.tolerance = read_optional(j.at("tolerances").at("gamma_d")).value_or(0.0);
    r.rho.tolerance = read_optional(j.at("tolerances").at("rho_d")).value_or(0.0);
    r.gamma.pass = j.at("pass").at("gamma_d").get<bool>();
    r.rho.pass = j.at("pass").at("rho_d").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.errors = j.at("errors").get<std::vector<std::string>>();
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw SpecError("$", std::string("invalid report: ") + e.what());
  }
}

}  // namespace lipdisc
