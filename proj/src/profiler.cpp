#include "brainframe/profiler.hpp"

#include <cmath>
#include <string>

#include "brainframe/error.hpp"

namespace brainframe::profile {

namespace {

void check_density(UseCase use_case, double density) {
    if (use_case == UseCase::ngj) return;
    if (!(density >= 0.0 && density <= 1.0))
        throw ConfigError("connectivity density " + std::to_string(density) +
                          " outside [0, 1]");
}

std::uint64_t gj_flops_per_connection(UseCase use_case) {
    switch (use_case) {
    case UseCase::rgj: return kRealisticGjFlopsPerConnection;
    case UseCase::sgj: return kSimplifiedGjFlopsPerConnection;
    case UseCase::ngj: return 0;
    }
    return 0;
}

} // namespace

std::uint64_t connection_count(UseCase use_case, std::uint64_t n, double density) {
    check_density(use_case, density);
    if (use_case == UseCase::ngj) return 0;
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    return static_cast<std::uint64_t>(std::llround(nn * density));
}

std::uint64_t flop_count(UseCase use_case, std::uint64_t n, double density) {
    return kCellFlops * n + gj_flops_per_connection(use_case) * connection_count(use_case, n, density);
}

std::uint64_t memory_accesses(UseCase use_case, std::uint64_t n, double density) {
    return kPerNeuronAccesses * n + connection_count(use_case, n, density);
}

double compute_memory_ratio(UseCase use_case, std::uint64_t n, double density) {
    const auto mem = memory_accesses(use_case, n, density);
    if (mem == 0) return 0.0;
    return static_cast<double>(flop_count(use_case, n, density)) / static_cast<double>(mem);
}

WorkloadProfile characterize(UseCase use_case, std::uint64_t n, double density) {
    WorkloadProfile p;
    p.use_case = use_case;
    p.n = n;
    p.density = use_case == UseCase::ngj ? 0.0 : density;
    p.connections = connection_count(use_case, n, density);
    p.flops_per_step = flop_count(use_case, n, density);
    p.gj_flops_per_step = gj_flops_per_connection(use_case) * p.connections;
    p.mem_accesses_per_step = memory_accesses(use_case, n, density);
    p.ratio = p.mem_accesses_per_step
                  ? static_cast<double>(p.flops_per_step) / static_cast<double>(p.mem_accesses_per_step)
                  : 0.0;
    p.gj_fraction = p.flops_per_step ? static_cast<double>(p.gj_flops_per_step) /
                                           static_cast<double>(p.flops_per_step)
                                     : 0.0;
    return p;
}

void DfeTickModel::validate() const {
    if (unroll_factor < 1) throw ConfigError("DFE unroll factor must be >= 1");
    if (!(clock_hz > 0.0) || !std::isfinite(clock_hz))
        throw ConfigError("DFE clock must be positive");
}

std::uint64_t estimate_dfe_ticks(UseCase use_case, std::uint64_t n, double density,
                                 const DfeTickModel& model) {
    model.validate();
    check_density(use_case, density);
    if (use_case == UseCase::ngj) return n + model.pipeline_depth;
    const std::uint64_t per_neuron = (n + model.unroll_factor - 1) / model.unroll_factor;
    return n * per_neuron + model.pipeline_depth;
}

double estimate_dfe_seconds(UseCase use_case, std::uint64_t n, double density,
                            const DfeTickModel& model) {
    return static_cast<double>(estimate_dfe_ticks(use_case, n, density, model)) / model.clock_hz;
}

std::uint64_t surrogate_flop_count(UseCase use_case, std::uint64_t n, std::uint64_t connections) {
    const auto& t = kSurrogateOps;
    switch (use_case) {
    case UseCase::rgj: return n * (t.cell_update + t.realistic_sign) + connections * t.realistic_term;
    case UseCase::sgj: return n * t.cell_update + connections * t.simplified_term;
    case UseCase::ngj: return n * t.cell_update;
    }
    return 0;
}

MeasuredOps measure_ops(const SimulationConfig& config) {
    Engine engine(config);
    OpTally tally;
    engine.run_counting(tally);
    MeasuredOps m;
    m.steps = static_cast<std::uint64_t>(config.duration_steps);
    m.cell_ops_per_step = tally.cell_ops / m.steps;
    m.gj_ops_per_step = tally.gj_ops / m.steps;
    m.ops_per_step = m.cell_ops_per_step + m.gj_ops_per_step;
    m.connections = tally.gj_terms / m.steps;
    const std::uint64_t reference =
        kCellFlops * config.n + gj_flops_per_connection(config.use_case) * m.connections;
    m.delta_vs_reference = static_cast<std::int64_t>(m.ops_per_step) - static_cast<std::int64_t>(reference);
    return m;
}

} // namespace brainframe::profile
