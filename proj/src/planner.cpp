#include "brainframe/planner.hpp"

#include <cmath>
#include <cstdio>

#include "brainframe/error.hpp"

namespace brainframe {

double TdpTable::watts(Fabric fabric) const noexcept {
    switch (fabric) {
    case Fabric::dfe: return dfe;
    case Fabric::phi: return phi;
    case Fabric::gpu: return gpu;
    }
    return 0.0;
}

std::int64_t steps_for_brain_time(double brain_seconds) {
    if (!std::isfinite(brain_seconds) || brain_seconds < 0.0)
        throw ConfigError("brain time must be finite and non-negative");
    return std::llround(brain_seconds / kRealTimeStepSeconds);
}

namespace {

double percent_of(double saved, double base) { return base > 0.0 ? 100.0 * saved / base : 0.0; }

} // namespace

PlanReport plan(const std::vector<ExperimentSpec>& batch, const Calibration& calibration,
                bool allow_rule_fallback, const TdpTable& tdp) {
    if (batch.empty()) throw ConfigError("experiment batch is empty");
    PlanReport report;
    report.experiments.reserve(batch.size());

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& spec = batch[i];
        PlannedExperiment e;
        e.spec = spec;
        e.steps = steps_for_brain_time(spec.brain_seconds);
        e.decision = select_fabric(classify(spec), &calibration);
        if (e.decision.predicted_sec_per_step) {
            e.seconds = static_cast<double>(e.steps) * *e.decision.predicted_sec_per_step;
            report.total_seconds += *e.seconds;
            report.total_energy_joules += tdp.watts(e.decision.fabric) * *e.seconds;
        } else if (allow_rule_fallback) {
            report.uncovered.push_back(i);
        } else {
            throw CoverageError("experiment " + std::to_string(i) + " (" +
                                std::string(to_string(spec.use_case)) + ", n=" +
                                std::to_string(spec.n) + ") has no calibrated time for " +
                                std::string(to_string(e.decision.fabric)));
        }
        report.experiments.push_back(std::move(e));
    }

    for (auto fabric : kAllFabrics) {
        FabricComparison c;
        c.fabric = fabric;
        bool covered = true;
        for (const auto& e : report.experiments) {
            if (!e.seconds) continue;
            const auto sps =
                calibration.seconds_per_step(fabric, e.spec.use_case, e.spec.density, e.spec.n);
            if (!sps) {
                covered = false;
                break;
            }
            c.total_seconds += static_cast<double>(e.steps) * *sps;
        }
        if (!covered) continue;
        c.time_saved_seconds = c.total_seconds - report.total_seconds;
        c.time_saved_percent = percent_of(c.time_saved_seconds, c.total_seconds);
        c.energy_joules = tdp.watts(fabric) * c.total_seconds;
        c.energy_saved_joules = c.energy_joules - report.total_energy_joules;
        c.energy_saved_percent = percent_of(c.energy_saved_joules, c.energy_joules);
        report.single_fabric.push_back(c);
    }
    return report;
}

std::vector<double> energy(const PlanReport& report, const TdpTable& tdp) {
    std::vector<double> joules;
    joules.reserve(report.experiments.size());
    for (const auto& e : report.experiments)
        joules.push_back(e.seconds ? tdp.watts(e.decision.fabric) * *e.seconds : 0.0);
    return joules;
}

std::string format_plan_table(const PlanReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-4s %6s %8s %4s %-5s %12s  %s\n", "#", "case", "n",
                  "density", "rt", "fab", "minutes", "reason");
    out += line;
    for (std::size_t i = 0; i < report.experiments.size(); ++i) {
        const auto& e = report.experiments[i];
        char minutes[32];
        if (e.seconds)
            std::snprintf(minutes, sizeof minutes, "%.3f", *e.seconds / 60.0);
        else
            std::snprintf(minutes, sizeof minutes, "%s", "n/a");
        std::snprintf(line, sizeof line, "%-4zu %-4s %6llu %8.2f %4s %-5s %12s  %s\n", i,
                      std::string(to_string(e.spec.use_case)).c_str(),
                      static_cast<unsigned long long>(e.spec.n), e.spec.density,
                      e.spec.real_time ? "yes" : "no",
                      std::string(to_string(e.decision.fabric)).c_str(), minutes,
                      e.decision.reason.c_str());
        out += line;
    }
    std::snprintf(line, sizeof line, "\nheterogeneous total: %.3f min, %.1f J\n",
                  report.total_seconds / 60.0, report.total_energy_joules);
    out += line;
    if (!report.single_fabric.empty()) {
        std::snprintf(line, sizeof line, "\n%-5s %12s %16s %14s %16s\n", "only", "minutes",
                      "time saved (min)", "energy (J)", "energy saved");
        out += line;
        for (const auto& c : report.single_fabric) {
            std::snprintf(line, sizeof line, "%-5s %12.3f %9.3f (%4.1f%%) %14.1f %9.1f (%4.1f%%)\n",
                          std::string(to_string(c.fabric)).c_str(), c.total_seconds / 60.0,
                          c.time_saved_seconds / 60.0, c.time_saved_percent, c.energy_joules,
                          c.energy_saved_joules, c.energy_saved_percent);
            out += line;
        }
    }
    if (!report.uncovered.empty()) {
        out += "\nuncovered experiments (rule-table choice, no time):";
        for (auto i : report.uncovered) out += " " + std::to_string(i);
        out += '\n';
    }
    return out;
}

} // namespace brainframe
