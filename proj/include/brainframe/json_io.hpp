#pragma once

// JSON documents exchanged with the CLI and the C API.
//
// Simulation config:
//   {
//     "use_case": "rgj" | "sgj" | "ngj",
//     "n": 96,
//     "duration_steps": 120000,
//     "dt": 0.05,
//     "connectivity": {"kind": "all_to_all", "weight": 0.04}
//                   | {"kind": "fixed_density", "p": 0.5, "seed": 7, "weight": 0.04}
//                   | {"kind": "from_file", "path": "matrix.csv"},
//     "inputs": [{"start_step": 1000, "end_step": 1500, "amplitude": 6.0,
//                 "targets": "all" | [0, 3, 5]}],
//     "backend": {"kind": "sequential"} | {"kind": "parallel", "workers": 4},
//     "record": {"stride": 1, "neurons": "all" | [0, 1]},
//     "seed": 0,
//     "init_jitter_mV": 0.0,
//     "precision": "f64" | "f32",
//     "conductances": {"g_na_soma": 120.0, ...}     (partial override)
//   }
// Only use_case, n and duration_steps are required. Unknown keys are
// rejected. A relative matrix path is resolved against base_dir.

#include <string>
#include <vector>

#include <json.hpp>

#include "brainframe/engine.hpp"
#include "brainframe/planner.hpp"
#include "brainframe/profiler.hpp"
#include "brainframe/selector.hpp"

namespace brainframe::json_io {

using nlohmann::json;

// Throws ConfigError (schema) and whatever connectivity loading throws.
SimulationConfig config_from_json(const json& doc, const std::string& base_dir = "");

json conductances_to_json(const ConductanceSet& cond);
ConductanceSet conductances_from_json(const json& doc, ConductanceSet base = {});

// {"use_case", "n", "density", "real_time", "brain_seconds"}; "case" is
// accepted as an alias of "use_case".
ExperimentSpec experiment_from_json(const json& doc);
// A list of experiments, or {"experiments": [...]}.
std::vector<ExperimentSpec> batch_from_json(const json& doc);

json decision_to_json(const SelectionDecision& decision);
json class_to_json(const ExperimentClass& cls);

profile::DfeTickModel dfe_model_from_json(const json& doc);
json profile_to_json(const profile::WorkloadProfile& p);
json dfe_estimate_to_json(UseCase use_case, std::uint64_t n, double density,
                          const profile::DfeTickModel& model);
json measured_to_json(const profile::MeasuredOps& m);

json plan_to_json(const PlanReport& report);

} // namespace brainframe::json_io
