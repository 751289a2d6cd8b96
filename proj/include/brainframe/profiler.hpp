#pragma once

// Analytic workload model of one simulation step.
//
// The per-item constants describe the full-size cell model, not the op count
// of the surrogate kernel shipped here. The instrumented engine reports the
// surrogate's own count (kSurrogateOps) so the difference stays visible.

#include <cstdint>

#include "brainframe/engine.hpp"
#include "brainframe/model.hpp"

namespace brainframe::profile {

inline constexpr std::uint64_t kCellFlops = 859;
inline constexpr std::uint64_t kRealisticGjFlopsPerConnection = 12;
inline constexpr std::uint64_t kSimplifiedGjFlopsPerConnection = 4;

inline constexpr std::uint64_t kStateAccesses = 19;
inline constexpr std::uint64_t kEvokedInputAccesses = 1;
inline constexpr std::uint64_t kConductanceAccesses = 20;
inline constexpr std::uint64_t kAxonOutputAccesses = 1;
inline constexpr std::uint64_t kPerNeuronAccesses =
    kStateAccesses + kEvokedInputAccesses + kConductanceAccesses + kAxonOutputAccesses;

struct WorkloadProfile {
    UseCase use_case = UseCase::ngj;
    std::uint64_t n = 0;
    double density = 0.0;
    std::uint64_t connections = 0;
    std::uint64_t flops_per_step = 0;
    std::uint64_t gj_flops_per_step = 0;
    std::uint64_t mem_accesses_per_step = 0;
    double ratio = 0.0;
    double gj_fraction = 0.0;
};

// round(n^2 * C), half away from zero; 0 for NGJ. Throws ConfigError unless
// 0 <= C <= 1 (NGJ ignores C).
std::uint64_t connection_count(UseCase use_case, std::uint64_t n, double density);

// RGJ: 859N + 12 round(N^2 C); SGJ: 859N + 4 round(N^2 C); NGJ: 859N.
std::uint64_t flop_count(UseCase use_case, std::uint64_t n, double density);

// 41N + round(N^2 C) single-value accesses (connectivity term 0 for NGJ).
std::uint64_t memory_accesses(UseCase use_case, std::uint64_t n, double density);

double compute_memory_ratio(UseCase use_case, std::uint64_t n, double density);

WorkloadProfile characterize(UseCase use_case, std::uint64_t n, double density);

// Dataflow-engine tick model. The gap-junction loop is unrolled U times and
// visits every potential connection, present or not, so ticks do not depend
// on density.
struct DfeTickModel {
    std::uint64_t unroll_factor = 8;
    std::uint64_t pipeline_depth = 100;
    double clock_hz = 150e6;

    // Throws ConfigError unless U >= 1 and clock > 0.
    void validate() const;
};

// RGJ/SGJ: n * ceil(n / U) + D. NGJ: n + D.
std::uint64_t estimate_dfe_ticks(UseCase use_case, std::uint64_t n, double density,
                                 const DfeTickModel& model = {});

double estimate_dfe_seconds(UseCase use_case, std::uint64_t n, double density,
                            const DfeTickModel& model = {});

// Floating-point op counts of the surrogate kernels, as measured by the
// counting build (CountingReal). Pinned by tests.
struct SurrogateOpTable {
    std::uint64_t cell_update;      // per cell per step
    std::uint64_t realistic_term;   // per connection
    std::uint64_t simplified_term;  // per connection
    std::uint64_t realistic_sign;   // per cell per step (RGJ sum is outward)
};
inline constexpr SurrogateOpTable kSurrogateOps{263, 11, 3, 1};

// Per-step op count the surrogate should produce for a network with
// `connections` nonzero entries.
std::uint64_t surrogate_flop_count(UseCase use_case, std::uint64_t n, std::uint64_t connections);

struct MeasuredOps {
    std::uint64_t steps = 0;
    std::uint64_t ops_per_step = 0;
    std::uint64_t cell_ops_per_step = 0;
    std::uint64_t gj_ops_per_step = 0;
    std::uint64_t connections = 0;
    // ops_per_step - flop_count for the same network
    std::int64_t delta_vs_reference = 0;
};

// Runs the instrumented engine sequentially for config.duration_steps and
// averages the counters per step.
MeasuredOps measure_ops(const SimulationConfig& config);

} // namespace brainframe::profile
