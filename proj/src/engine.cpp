#include "brainframe/engine.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <type_traits>

#include "brainframe/counting_real.hpp"
#include "brainframe/error.hpp"
#include "brainframe/rng.hpp"

namespace brainframe {

void SimulationConfig::validate() const {
    if (n < 1) throw ConfigError("network size n must be >= 1");
    if (n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("network size too large");
    if (duration_steps < 1) throw ConfigError("duration_steps must be >= 1");
    if (!std::isfinite(dt) || dt < 0.0) throw ConfigError("dt must be finite and non-negative");
    if (backend.workers < 1) throw ConfigError("worker count must be >= 1");
    if (record.stride < 1) throw ConfigError("record stride must be >= 1");
    if (!std::isfinite(init_jitter_mv) || init_jitter_mv < 0.0)
        throw ConfigError("init_jitter_mv must be finite and non-negative");
    if (record.neurons)
        for (auto i : *record.neurons)
            if (i >= n) throw ConfigError("recorded neuron " + std::to_string(i) + " out of range");
    if (use_case != UseCase::ngj) {
        if (!connectivity)
            throw ConfigError(std::string(to_string(use_case)) + " requires a connectivity matrix");
        if (connectivity->n() != n)
            throw ConfigError("connectivity matrix is " + std::to_string(connectivity->n()) + "x" +
                              std::to_string(connectivity->n()) + " but n = " + std::to_string(n));
    }
    inputs.validate(n);
    conductances.validate();
}

namespace {

class Fnv1a {
public:
    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001B3ULL;
        }
    }
    template <typename T>
    void value(T v) {
        static_assert(std::is_arithmetic_v<T>);
        bytes(&v, sizeof v);
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

} // namespace

std::string config_digest(const SimulationConfig& c) {
    Fnv1a h;
    h.value(static_cast<int>(c.use_case));
    h.value(static_cast<std::uint64_t>(c.n));
    h.value(c.duration_steps);
    h.value(c.dt);
    h.value(static_cast<std::uint64_t>(c.inputs.pulses.size()));
    for (const auto& p : c.inputs.pulses) {
        h.value(p.start_step);
        h.value(p.end_step);
        h.value(p.amplitude);
        h.value(static_cast<int>(p.targets.has_value()));
        if (p.targets) {
            h.value(static_cast<std::uint64_t>(p.targets->size()));
            for (auto t : *p.targets) h.value(t);
        }
    }
    h.value(c.record.stride);
    h.value(static_cast<int>(c.record.neurons.has_value()));
    if (c.record.neurons) {
        h.value(static_cast<std::uint64_t>(c.record.neurons->size()));
        for (auto t : *c.record.neurons) h.value(t);
    }
    h.value(c.seed);
    h.value(c.init_jitter_mv);
    h.value(static_cast<int>(c.precision));
    for (double v : c.conductances.values()) h.value(v);
    h.value(static_cast<int>(c.connectivity.has_value()));
    if (c.connectivity && c.use_case != UseCase::ngj) {
        h.value(static_cast<std::uint64_t>(c.connectivity->n()));
        const auto& w = c.connectivity->weights();
        h.bytes(w.data(), w.size() * sizeof(double));
    }
    return h.hex();
}

std::vector<NeuronRange> partition(std::size_t n, std::size_t workers) {
    std::vector<NeuronRange> out(workers, NeuronRange{n, n});
    if (workers == 0) return out;
    const std::size_t active = std::min(n, workers);
    if (active == 0) return out;
    const std::size_t base = n / active;
    const std::size_t extra = n % active;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < active; ++w) {
        const std::size_t size = base + (w < extra ? 1 : 0);
        out[w] = {begin, begin + size};
        begin += size;
    }
    return out;
}

template <typename Real>
SparseRows<Real> SparseRows<Real>::from_matrix(const ConnectivityMatrix& matrix) {
    SparseRows rows;
    const std::size_t n = matrix.n();
    rows.offsets.reserve(n + 1);
    rows.offsets.push_back(0);
    rows.cols.reserve(matrix.nonzero_count());
    rows.weights.reserve(matrix.nonzero_count());
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (row[j] != 0.0) {
                rows.cols.push_back(static_cast<std::uint32_t>(j));
                rows.weights.push_back(Real(row[j]));
            }
        }
        rows.offsets.push_back(rows.cols.size());
    }
    return rows;
}

namespace {

constexpr std::size_t kNoNeuron = std::numeric_limits<std::size_t>::max();

template <typename Real>
constexpr bool kCounting = std::is_same_v<Real, CountingReal>;

// Inward gap-junction current of neuron i from the current buffer.
template <typename Real>
Real gj_inward(const std::vector<BasicNeuronState<Real>>& current, const SparseRows<Real>& rows,
               UseCase use_case, std::size_t i) {
    const Real prev = current[i].vdend;
    Real ic(0.0);
    const std::size_t end = rows.offsets[i + 1];
    if (use_case == UseCase::rgj) {
        for (std::size_t k = rows.offsets[i]; k < end; ++k)
            ic = kernel::accumulate_realistic(ic, prev, current[rows.cols[k]].vdend, rows.weights[k]);
        // The realistic sum is an outward current.
        return -ic;
    }
    for (std::size_t k = rows.offsets[i]; k < end; ++k)
        ic = kernel::accumulate_simplified(ic, prev, current[rows.cols[k]].vdend, rows.weights[k]);
    return ic;
}

// Updates neurons [range.begin, range.end) from state.current into
// state.next. Returns the first neuron whose new state is non-finite.
template <typename Real, typename Evoked>
std::size_t update_range(NetworkState<Real>& state, const SparseRows<Real>* rows, UseCase use_case,
                         const ConductanceSet& cond, Real dt, NeuronRange range, Evoked&& evoked,
                         OpTally* tally) {
    const auto& current = state.current;
    auto& next = state.next;
    std::size_t bad = kNoNeuron;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        std::uint64_t before = 0;
        if constexpr (kCounting<Real>) before = CountingReal::counter();

        Real i_gj(0.0);
        if (use_case != UseCase::ngj) i_gj = gj_inward(current, *rows, use_case, i);

        std::uint64_t mid = 0;
        if constexpr (kCounting<Real>) mid = CountingReal::counter();

        next[i] = kernel::cell_update_unchecked(current[i], cond, i_gj, Real(evoked(i)), dt);

        if constexpr (kCounting<Real>) {
            if (tally) {
                tally->gj_ops += mid - before;
                tally->cell_ops += CountingReal::counter() - mid;
                tally->cell_updates += 1;
                if (use_case != UseCase::ngj) tally->gj_terms += rows->offsets[i + 1] - rows->offsets[i];
            }
        }
        if (bad == kNoNeuron && !kernel::is_finite(next[i])) bad = i;
    }
    return bad;
}

// Dense per-pulse target masks so the per-neuron lookup is O(pulses).
class InputPlan {
public:
    InputPlan(const EvokedInputSchedule& schedule, std::size_t n) {
        pulses_.reserve(schedule.pulses.size());
        for (const auto& p : schedule.pulses) {
            Entry e{p.start_step, p.end_step, p.amplitude, {}};
            if (p.targets) {
                e.mask.assign(n, 0);
                for (auto t : *p.targets) e.mask[t] = 1;
            }
            pulses_.push_back(std::move(e));
        }
    }

    double at(std::int64_t step, std::size_t neuron) const noexcept {
        double current = 0.0;
        for (const auto& p : pulses_)
            if (step >= p.start && step < p.end && (p.mask.empty() || p.mask[neuron]))
                current += p.amplitude;
        return current;
    }

private:
    struct Entry {
        std::int64_t start;
        std::int64_t end;
        double amplitude;
        std::vector<char> mask;
    };
    std::vector<Entry> pulses_;
};

class Recorder {
public:
    Recorder(const SimulationConfig& config) : stride_(config.record.stride) {
        if (config.record.neurons) {
            neurons_ = *config.record.neurons;
        } else {
            neurons_.resize(config.n);
            for (std::size_t i = 0; i < config.n; ++i) neurons_[i] = static_cast<std::uint32_t>(i);
        }
        recorded_steps_ = (config.duration_steps + stride_ - 1) / stride_;
        rows_.reserve(static_cast<std::size_t>(recorded_steps_) * neurons_.size());
    }

    template <typename Real>
    void record(std::int64_t step, const std::vector<BasicNeuronState<Real>>& states) {
        if (step % stride_ != 0) return;
        for (auto i : neurons_) rows_.push_back({step, i, static_cast<double>(states[i].vaxon)});
    }

    Trace finish(std::string digest, StepTiming timing) {
        Trace t;
        t.rows = std::move(rows_);
        t.config_digest = std::move(digest);
        t.recorded_steps = recorded_steps_;
        t.recorded_neurons = neurons_.size();
        t.timing = timing;
        return t;
    }

private:
    std::int64_t stride_;
    std::int64_t recorded_steps_ = 0;
    std::vector<std::uint32_t> neurons_;
    std::vector<TraceRow> rows_;
};

class TimingAccumulator {
public:
    void add(double seconds) {
        if (count_ == 0) {
            min_ = max_ = seconds;
        } else {
            min_ = std::min(min_, seconds);
            max_ = std::max(max_, seconds);
        }
        sum_ += seconds;
        ++count_;
    }
    StepTiming result() const {
        return {count_, min_, count_ ? sum_ / static_cast<double>(count_) : 0.0, max_};
    }

private:
    std::uint64_t count_ = 0;
    double min_ = 0.0;
    double max_ = 0.0;
    double sum_ = 0.0;
};

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename Real>
NetworkState<Real> initial_network(const SimulationConfig& config) {
    const NeuronState base = config.conductances == kDefaultConductances
                                 ? default_initial_state()
                                 : resting_state(config.conductances);
    NetworkState<Real> state(config.n, base.template cast<Real>());
    if (config.init_jitter_mv > 0.0) {
        SeededStream stream(config.seed);
        const double j = config.init_jitter_mv;
        for (std::size_t i = 0; i < config.n; ++i) {
            NeuronState s = base;
            s.vdend += stream.uniform(-j, j);
            s.vsoma += stream.uniform(-j, j);
            s.vaxon += stream.uniform(-j, j);
            state.current[i] = state.next[i] = s.template cast<Real>();
        }
    }
    return state;
}

struct Prepared {
    const SimulationConfig& config;
    InputPlan inputs;
    std::string digest;
};

template <typename Real>
std::optional<SparseRows<Real>> sparse_rows_for(const SimulationConfig& config) {
    if (config.use_case == UseCase::ngj) return std::nullopt;
    return SparseRows<Real>::from_matrix(*config.connectivity);
}

template <typename Real>
Trace run_sequential_impl(const Prepared& p, OpTally* tally) {
    const auto& config = p.config;
    auto state = initial_network<Real>(config);
    const auto rows = sparse_rows_for<Real>(config);
    const SparseRows<Real>* rows_ptr = rows ? &*rows : nullptr;
    Recorder recorder(config);
    TimingAccumulator timing;
    const Real dt(config.dt);
    const NeuronRange all{0, config.n};

    for (std::int64_t t = 0; t < config.duration_steps; ++t) {
        const auto start = Clock::now();
        const std::size_t bad =
            update_range(state, rows_ptr, config.use_case, config.conductances, dt, all,
                         [&](std::size_t i) { return p.inputs.at(t, i); }, tally);
        if (bad != kNoNeuron) throw DivergenceError(t, static_cast<std::int64_t>(bad));
        state.swap();
        timing.add(seconds_between(start, Clock::now()));
        recorder.record(t, state.current);
    }
    return recorder.finish(p.digest, timing.result());
}

template <typename Real>
Trace run_parallel_impl(const Prepared& p, std::size_t workers) {
    const auto& config = p.config;
    auto state = initial_network<Real>(config);
    const auto rows = sparse_rows_for<Real>(config);
    const SparseRows<Real>* rows_ptr = rows ? &*rows : nullptr;
    Recorder recorder(config);
    TimingAccumulator timing;
    const Real dt(config.dt);

    auto ranges = partition(config.n, workers);
    std::erase_if(ranges, [](const NeuronRange& r) { return r.size() == 0; });

    // Written by workers before the barrier, read by the completion step.
    std::atomic<std::size_t> bad_neuron{kNoNeuron};
    // Owned by the completion step; workers read them only after a barrier.
    std::int64_t step_index = 0;
    std::int64_t diverged_at = -1;
    bool stop = false;
    auto step_start = Clock::now();

    auto on_step_complete = [&]() noexcept {
        timing.add(seconds_between(step_start, Clock::now()));
        if (bad_neuron.load(std::memory_order_relaxed) != kNoNeuron) {
            diverged_at = step_index;
            stop = true;
            return;
        }
        state.swap();
        recorder.record(step_index, state.current);
        ++step_index;
        if (step_index == config.duration_steps) stop = true;
        step_start = Clock::now();
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(ranges.size()), on_step_complete);

    auto worker = [&](NeuronRange range) {
        while (true) {
            const std::int64_t t = step_index;
            const std::size_t bad =
                update_range(state, rows_ptr, config.use_case, config.conductances, dt, range,
                             [&](std::size_t i) { return p.inputs.at(t, i); }, nullptr);
            if (bad != kNoNeuron) {
                std::size_t expected = bad_neuron.load(std::memory_order_relaxed);
                while (bad < expected &&
                       !bad_neuron.compare_exchange_weak(expected, bad, std::memory_order_relaxed)) {
                }
            }
            sync.arrive_and_wait();
            if (stop) return;
        }
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(ranges.size() - 1);
        for (std::size_t w = 1; w < ranges.size(); ++w) threads.emplace_back(worker, ranges[w]);
        worker(ranges[0]);
    }

    if (diverged_at >= 0)
        throw DivergenceError(diverged_at, static_cast<std::int64_t>(bad_neuron.load()));
    return recorder.finish(p.digest, timing.result());
}

template <typename Real>
Trace run_with_precision(const Prepared& p) {
    const auto& backend = p.config.backend;
    if (backend.kind == Backend::Kind::parallel) return run_parallel_impl<Real>(p, backend.workers);
    return run_sequential_impl<Real>(p, nullptr);
}

} // namespace

template <typename Real>
void step(NetworkState<Real>& state, const SparseRows<Real>* rows, UseCase use_case,
          std::span<const double> evoked, const ConductanceSet& cond, double dt) {
    if (state.current.size() != state.next.size() || state.current.data() == state.next.data())
        throw ConfigError("step: read and write buffers must be distinct and equally sized");
    if (evoked.size() != state.n())
        throw InputShapeError("step: evoked input has " + std::to_string(evoked.size()) +
                              " entries for " + std::to_string(state.n()) + " neurons");
    if (use_case != UseCase::ngj && (!rows || rows->offsets.size() != state.n() + 1))
        throw ConfigError("step: connectivity does not match the network size");
    const std::size_t bad =
        update_range(state, rows, use_case, cond, Real(dt), NeuronRange{0, state.n()},
                     [&](std::size_t i) { return evoked[i]; }, nullptr);
    if (bad != kNoNeuron) throw DivergenceError(state.step_index, static_cast<std::int64_t>(bad));
    state.swap();
}

template struct SparseRows<double>;
template struct SparseRows<float>;
template struct SparseRows<CountingReal>;
template void step<double>(NetworkState<double>&, const SparseRows<double>*, UseCase,
                           std::span<const double>, const ConductanceSet&, double);
template void step<float>(NetworkState<float>&, const SparseRows<float>*, UseCase,
                          std::span<const double>, const ConductanceSet&, double);

Engine::Engine(SimulationConfig config) : config_(std::move(config)) { config_.validate(); }

Trace Engine::run() {
    const Prepared p{config_, InputPlan(config_.inputs, config_.n), config_digest(config_)};
    if (config_.precision == Precision::f32) return run_with_precision<float>(p);
    return run_with_precision<double>(p);
}

Trace Engine::run_counting(OpTally& tally) {
    const Prepared p{config_, InputPlan(config_.inputs, config_.n), config_digest(config_)};
    tally = {};
    return run_sequential_impl<CountingReal>(p, &tally);
}

Trace simulate(const SimulationConfig& config) { return Engine(config).run(); }

Trace run_parallel(SimulationConfig config, std::size_t workers) {
    config.backend = Backend::parallel(workers);
    return Engine(std::move(config)).run();
}

} // namespace brainframe
