#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lipdisc/bounds.hpp"
#include "lipdisc/constants.hpp"
#include "lipdisc/discretize.hpp"
#include "lipdisc/system.hpp"
#include "lipdisc/verify.hpp"

namespace lipdisc {

using nlohmann::json;

// System file:
//   {
//     "name": "pendulum",
//     "A": [[0, 1], [0, -0.5]],          row-major, n x n
//     "C": [[1, 0]],                      p x n
//     "f": ["0", "-sin(x1)"],             n expressions over x1..xn, u1..um
//     "region": {"lower": [...], "upper": [...]},
//     "input_region": {"lower": [...], "upper": [...]},   optional
//     "T": 0.1
//   }
// Throws SpecError whose path() names the offending field.
SystemSpec system_spec_from_json(const json& j);
SystemSpec load_system_spec(const std::filesystem::path& path);
json system_spec_to_json(const SystemSpec& spec);

// Tool identification block embedded in every report.
json tool_info();

void to_json(json& j, const SamplingConfig& cfg);
void to_json(json& j, const Witness& w);
void to_json(json& j, const SupEstimate& s);
void to_json(json& j, const ConstantEstimates& c);
void to_json(json& j, const BoundResult& b);
void to_json(json& j, const VerificationReport& r);
void to_json(json& j, const ConvergenceStudy& s);
void to_json(json& j, const Trajectory& t);

// Reloads a report written by to_json(VerificationReport). Throws SpecError
// on missing or mistyped fields.
VerificationReport verification_report_from_json(const json& j);

}  // namespace lipdisc
