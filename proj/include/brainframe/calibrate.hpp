#pragma once

// Local calibration sweeps: time the engine's own backends over a grid of
// (use case, density, n) and emit a Calibration table. Measured rows are
// labelled with the fabric they stand in for; optionally the dataflow tick
// model contributes analytic DFE rows.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "brainframe/profiler.hpp"
#include "brainframe/selector.hpp"

namespace brainframe {

struct CalibrationSweep {
    Fabric label = Fabric::phi;
    std::size_t workers = 1; // 1 runs the sequential backend
    std::vector<UseCase> cases{UseCase::rgj, UseCase::sgj, UseCase::ngj};
    std::vector<double> densities{0.25, 0.5, 0.75, 1.0};
    std::vector<std::uint64_t> sizes{96, 192, 384, 768, 960};
    std::int64_t steps = 20;
    std::uint64_t seed = 1;
    double weight = 0.04;
    std::optional<profile::DfeTickModel> dfe_model;

    void validate() const; // ConfigError
};

// {"label", "workers", "cases", "densities", "sizes", "steps", "seed",
//  "weight", "dfe_model"}; all optional.
CalibrationSweep sweep_from_json(const nlohmann::json& doc);

using SweepProgress = std::function<void(UseCase, double density, std::uint64_t n, double sec_per_step)>;

Calibration run_calibration_sweep(const CalibrationSweep& sweep, const SweepProgress& progress = {});

} // namespace brainframe
