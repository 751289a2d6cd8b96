#pragma once

// Batch planning across fabrics: per-experiment fabric choice, total time,
// and time/energy savings against single-fabric systems.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brainframe/selector.hpp"

namespace brainframe {

struct TdpTable {
    double dfe = tdp_watts(Fabric::dfe);
    double phi = tdp_watts(Fabric::phi);
    double gpu = tdp_watts(Fabric::gpu);

    double watts(Fabric fabric) const noexcept;
};

// Number of 50 us steps in `brain_seconds` of model time.
std::int64_t steps_for_brain_time(double brain_seconds);

struct PlannedExperiment {
    ExperimentSpec spec;
    std::int64_t steps = 0;
    SelectionDecision decision;
    std::optional<double> seconds; // nullopt: not covered by the calibration
};

struct FabricComparison {
    Fabric fabric = Fabric::dfe;
    double total_seconds = 0.0;
    double time_saved_seconds = 0.0;
    double time_saved_percent = 0.0;
    double energy_joules = 0.0;
    double energy_saved_joules = 0.0;
    double energy_saved_percent = 0.0;
};

struct PlanReport {
    std::vector<PlannedExperiment> experiments;
    double total_seconds = 0.0;
    double total_energy_joules = 0.0;
    // Only fabrics the calibration covers for every timed experiment.
    std::vector<FabricComparison> single_fabric;
    std::vector<std::size_t> uncovered;
};

// For each experiment: fabric = select_fabric(classify(spec), calibration),
// time = steps * seconds-per-step of that fabric. Savings are measured
// against running every timed experiment on one fabric.
// Throws CoverageError when an experiment has no calibrated time for its
// chosen fabric, unless allow_rule_fallback is set; then it is listed in
// `uncovered` and left out of the totals.
PlanReport plan(const std::vector<ExperimentSpec>& batch, const Calibration& calibration,
                bool allow_rule_fallback = false, const TdpTable& tdp = {});

// Joules per experiment: TDP of the chosen fabric times its predicted time.
std::vector<double> energy(const PlanReport& report, const TdpTable& tdp = {});

// Human-readable summary in minutes.
std::string format_plan_table(const PlanReport& report);

} // namespace brainframe
