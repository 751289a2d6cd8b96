#pragma once

// Step-synchronous network simulator.
//
// Every step reads only the `current` buffer and writes only the `next`
// buffer; the buffers swap once per step. Gap-junction sums always run over
// a row's nonzero connections in ascending column order, so the sequential
// and the partitioned parallel backends produce bitwise-identical traces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brainframe/model.hpp"
#include "brainframe/network.hpp"

namespace brainframe {

enum class Precision { f64, f32 };

struct Backend {
    enum class Kind { sequential, parallel };
    Kind kind = Kind::sequential;
    std::size_t workers = 1;

    static Backend sequential() { return {}; }
    static Backend parallel(std::size_t workers) { return {Kind::parallel, workers}; }
    friend bool operator==(const Backend&, const Backend&) = default;
};

struct RecordSpec {
    std::int64_t stride = 1;
    std::optional<std::vector<std::uint32_t>> neurons; // nullopt: all neurons
    friend bool operator==(const RecordSpec&, const RecordSpec&) = default;
};

struct SimulationConfig {
    UseCase use_case = UseCase::ngj;
    std::size_t n = 1;
    std::optional<ConnectivityMatrix> connectivity; // required unless NGJ
    std::int64_t duration_steps = 1;
    double dt = kDefaultDtMs;
    EvokedInputSchedule inputs;
    Backend backend;
    RecordSpec record;
    std::uint64_t seed = 0;
    // Each cell's three voltages get an independent uniform offset in
    // [-jitter, +jitter] mV drawn from `seed`. Zero means identical cells.
    double init_jitter_mv = 0.0;
    Precision precision = Precision::f64;
    ConductanceSet conductances;

    // Throws ConfigError.
    void validate() const;
};

struct TraceRow {
    std::int64_t step = 0;
    std::uint32_t neuron = 0;
    double vaxon_mv = 0.0;
    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct StepTiming {
    std::uint64_t steps = 0;
    double min_s = 0.0;
    double mean_s = 0.0;
    double max_s = 0.0;
};

struct Trace {
    std::vector<TraceRow> rows;
    std::string config_digest;
    std::int64_t recorded_steps = 0;
    std::size_t recorded_neurons = 0;
    StepTiming timing;
};

// FNV-1a digest (16 hex digits) of everything that determines the numbers
// in a trace. Backend and worker count are excluded: they never change the
// result.
std::string config_digest(const SimulationConfig& config);

struct NeuronRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const NeuronRange&, const NeuronRange&) = default;
};

// Contiguous near-uniform split. Always returns `workers` ranges; the first
// n % active ranges get one extra cell and workers beyond n get empty ranges.
std::vector<NeuronRange> partition(std::size_t n, std::size_t workers);

// Nonzero connections of each row, column-ascending.
template <typename Real>
struct SparseRows {
    std::vector<std::size_t> offsets; // n + 1 entries
    std::vector<std::uint32_t> cols;
    std::vector<Real> weights;

    static SparseRows from_matrix(const ConnectivityMatrix& matrix);
    std::size_t nonzero_count() const noexcept { return cols.size(); }
};

template <typename Real>
struct NetworkState {
    std::vector<BasicNeuronState<Real>> current;
    std::vector<BasicNeuronState<Real>> next;
    std::int64_t step_index = 0;

    NetworkState() = default;
    NetworkState(std::size_t n, const BasicNeuronState<Real>& init) : current(n, init), next(n, init) {}
    std::size_t n() const noexcept { return current.size(); }
    void swap() noexcept {
        current.swap(next);
        ++step_index;
    }
};

// Per-kernel operation tallies from the counting build.
struct OpTally {
    std::uint64_t cell_updates = 0;
    std::uint64_t gj_terms = 0;
    std::uint64_t cell_ops = 0; // inside cell_update
    std::uint64_t gj_ops = 0;   // gap-junction sums incl. per-cell sign handling
};

// Advances every neuron by one step: gap-junction current from `current`
// dendritic voltages, then cell_update into `next`, then swap. `rows` may be
// null for NGJ. evoked holds one inward current per neuron.
// Throws DivergenceError naming the step and the first non-finite neuron.
template <typename Real>
void step(NetworkState<Real>& state, const SparseRows<Real>* rows, UseCase use_case,
          std::span<const double> evoked, const ConductanceSet& cond, double dt);

// Runs a whole simulation on one engine instance. Not reentrant.
class Engine {
public:
    explicit Engine(SimulationConfig config);

    const SimulationConfig& config() const noexcept { return config_; }
    Trace run();

    // Instrumented run with the counting scalar (sequential, f64 numerics).
    // The returned trace is bitwise the f64 trace.
    Trace run_counting(OpTally& tally);

private:
    SimulationConfig config_;
};

// Dispatches on config.backend. Throws ConfigError / DivergenceError.
Trace simulate(const SimulationConfig& config);

// Same as simulate with Backend::parallel(workers).
Trace run_parallel(SimulationConfig config, std::size_t workers);

} // namespace brainframe
