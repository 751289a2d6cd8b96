// Acceptance run: one PASS/FAIL line per top-level criterion.
//
// Exit status is the number of failing criteria that are not listed as
// known deviations. A known deviation still prints FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brainframe/engine.hpp"
#include "brainframe/io.hpp"
#include "brainframe/model.hpp"
#include "brainframe/planner.hpp"
#include "brainframe/profiler.hpp"
#include "brainframe/selector.hpp"

using namespace brainframe;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    const char* name;
    bool known_deviation;
    std::function<Outcome()> check;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- workload model -------------------------------------------------------

Outcome flop_fidelity() {
    const auto p = profile::characterize(UseCase::rgj, 96, 1.0);
    const double pct = 100.0 * p.gj_fraction;
    return {p.flops_per_step == 193056 && std::abs(pct - 57.3) <= 1.0,
            fmt("flops=%llu gj=%.2f%%", static_cast<unsigned long long>(p.flops_per_step), pct)};
}

// Walks the network cell by cell and adds the per-item costs: 859 ops and 41
// accesses per cell, then each cell's share of the connections at 12 or 4
// ops and one access apiece.
struct ItemTotals {
    std::uint64_t flops = 0;
    std::uint64_t accesses = 0;
};

ItemTotals count_items(UseCase uc, std::uint64_t n, double c) {
    const std::uint64_t edges =
        uc == UseCase::ngj ? 0 : static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * n * c + 0.5));
    const std::uint64_t per_edge = uc == UseCase::rgj ? 12 : uc == UseCase::sgj ? 4 : 0;
    ItemTotals t;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t row_edges = edges / n + (i < edges % n ? 1 : 0);
        t.flops += 859;
        t.accesses += 19 + 1 + 20 + 1;
        for (std::uint64_t e = 0; e < row_edges; e += 1024) {
            const std::uint64_t chunk = std::min<std::uint64_t>(1024, row_edges - e);
            t.flops += per_edge * chunk;
            t.accesses += chunk;
        }
    }
    return t;
}

Outcome formula_suite() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1000);
    std::uniform_int_distribution<std::uint64_t> size(1, 7680);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto uc = static_cast<UseCase>(pick(rng));
        const auto n = size(rng);
        const double c = (i % 5 == 0) ? std::round(unit(rng) * 4.0) / 4.0 : unit(rng);
        const auto ref = count_items(uc, n, c);
        if (profile::flop_count(uc, n, c) != ref.flops || profile::memory_accesses(uc, n, c) != ref.accesses)
            ++mismatches;
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && s < 1.0, fmt("1000 triples, %d mismatches, %.3f s", mismatches, s)};
}

Outcome ratio_properties() {
    std::vector<std::uint64_t> grid;
    for (int k = 0; k < 50; ++k) grid.push_back(96 + static_cast<std::uint64_t>(k) * (7680 - 96) / 49);

    bool ngj_constant = true;
    for (auto n : grid)
        for (double c : {0.0, 0.5, 1.0})
            ngj_constant &= profile::compute_memory_ratio(UseCase::ngj, n, c) == 859.0 / 41.0;

    int rising_pairs = 0, total_pairs = 0;
    for (auto uc : {UseCase::rgj, UseCase::sgj})
        for (double c : {0.25, 0.5, 0.75, 1.0})
            for (std::size_t k = 1; k < grid.size(); ++k, ++total_pairs)
                if (profile::compute_memory_ratio(uc, grid[k], c) > profile::compute_memory_ratio(uc, grid[k - 1], c))
                    ++rising_pairs;

    const double r_lo = profile::compute_memory_ratio(UseCase::rgj, grid.front(), 1.0);
    const double r_hi = profile::compute_memory_ratio(UseCase::rgj, grid.back(), 1.0);
    return {ngj_constant && rising_pairs == total_pairs,
            fmt("NGJ constant=%s; coupled ratios rising on %d/%d grid steps (RGJ C=1: %.4f at n=96, %.4f at n=7680)",
                ngj_constant ? "yes" : "no", rising_pairs, total_pairs, r_lo, r_hi)};
}

// ---- engine ---------------------------------------------------------------

SimulationConfig synchrony_config(UseCase uc) {
    SimulationConfig c;
    c.use_case = uc;
    c.n = 96;
    c.duration_steps = 120000;
    if (uc != UseCase::ngj) c.connectivity = ConnectivityMatrix::all_to_all(96, 0.04);
    c.inputs.pulses = {{1000, 1500, 6.0, std::nullopt}};
    return c;
}

Outcome synchrony() {
    const auto t0 = Clock::now();
    const Trace ngj = simulate(synchrony_config(UseCase::ngj));
    const Trace rgj = simulate(synchrony_config(UseCase::rgj));
    const double s = seconds_since(t0);

    bool ok = rgj.rows.size() == 96u * 120000u && rgj.rows.size() == ngj.rows.size();
    std::size_t bad_rows = 0;
    for (std::size_t r = 0; ok && r < rgj.rows.size(); ++r) {
        const auto& first = rgj.rows[r - r % 96];
        if (std::memcmp(&rgj.rows[r].vaxon_mv, &first.vaxon_mv, sizeof(double)) != 0 ||
            std::memcmp(&rgj.rows[r].vaxon_mv, &ngj.rows[r].vaxon_mv, sizeof(double)) != 0)
            ++bad_rows;
    }
    double peak = -1e9;
    for (const auto& row : rgj.rows) peak = std::max(peak, row.vaxon_mv);
    ok = ok && bad_rows == 0 && s < 60.0;
    return {ok, fmt("96 cells x 120000 steps, %zu differing rows, peak %.2f mV, %.1f s", bad_rows, peak, s)};
}

// Compares field by field; TraceRow has padding that memcmp would read.
bool same_bits(const Trace& a, const Trace& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.step != y.step || x.neuron != y.neuron ||
            std::memcmp(&x.vaxon_mv, &y.vaxon_mv, sizeof(double)) != 0)
            return false;
    }
    return true;
}

Outcome backend_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20);
    std::uniform_int_distribution<std::size_t> size(2, 480);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int mismatches = 0;
    std::size_t largest = 0;
    for (int trial = 0; trial < 20; ++trial) {
        SimulationConfig c;
        c.use_case = trial < 3 ? static_cast<UseCase>(trial) : static_cast<UseCase>(pick(rng));
        c.n = trial == 0 ? 480 : size(rng);
        c.duration_steps = 1000;
        c.seed = rng();
        c.init_jitter_mv = 2.0 * unit(rng);
        c.precision = trial % 4 == 3 ? Precision::f32 : Precision::f64;
        if (c.use_case != UseCase::ngj) {
            const double p = trial % 2 ? 1.0 : 0.05 + 0.95 * unit(rng);
            c.connectivity = io::generate_connectivity(
                io::ConnectivityGeneratorSpec::fixed_density(p, c.seed, 0.02 + 0.05 * unit(rng)), c.n);
        }
        const auto start = static_cast<std::int64_t>(unit(rng) * 400);
        c.inputs.pulses = {{start, start + 300, 4.0 + 6.0 * unit(rng), std::nullopt}};
        largest = std::max(largest, c.n);

        const Trace seq = simulate(c);
        for (std::size_t w : {2u, 4u, 8u}) {
            const Trace par = run_parallel(c, w);
            if (!same_bits(par, seq)) ++mismatches;
        }
    }
    const double s = seconds_since(t0);
    return {mismatches == 0 && s < 120.0,
            fmt("20 configs (n <= %zu) x workers {2,4,8}, %d mismatches, %.1f s", largest, mismatches, s)};
}

// ---- selection and planning -------------------------------------------------

Fabric rule_pick(UseCase uc, std::uint64_t n, double c, bool rt = false) {
    return select_fabric(classify({uc, n, c, rt, 40.0})).fabric;
}

Outcome selector_conformance() {
    int checked = 0, wrong = 0;
    auto expect = [&](bool ok) {
        ++checked;
        if (!ok) ++wrong;
    };
    expect(rule_pick(UseCase::rgj, 5760, 1.0) == Fabric::gpu);
    expect(rule_pick(UseCase::rgj, 700, 0.25) == Fabric::phi);
    expect(rule_pick(UseCase::sgj, 96, 1.0) == Fabric::dfe);
    expect(rule_pick(UseCase::ngj, 2000, 0.0) == Fabric::dfe);
    for (auto uc : {UseCase::rgj, UseCase::sgj, UseCase::ngj})
        for (std::uint64_t n : {96u, 500u, 960u, 4800u, 7680u})
            for (double c : {0.25, 1.0}) expect(rule_pick(uc, n, c, true) == Fabric::dfe);

    using Want = std::optional<std::uint64_t>;
    auto rt = [&](Fabric f, UseCase uc, double c, Want want) { expect(rt_max_network(f, uc, c) == want); };
    for (double c : {0.25, 0.5, 0.75, 1.0}) {
        rt(Fabric::dfe, UseCase::rgj, c, 310);
        rt(Fabric::dfe, UseCase::sgj, c, 400);
        rt(Fabric::phi, UseCase::rgj, c, std::nullopt);
        rt(Fabric::phi, UseCase::sgj, c, std::nullopt);
        rt(Fabric::gpu, UseCase::rgj, c, std::nullopt);
    }
    rt(Fabric::gpu, UseCase::sgj, 0.25, 96);
    rt(Fabric::gpu, UseCase::sgj, 0.5, 96);
    rt(Fabric::gpu, UseCase::sgj, 0.75, std::nullopt);
    rt(Fabric::gpu, UseCase::sgj, 1.0, std::nullopt);
    rt(Fabric::dfe, UseCase::ngj, 0.0, 7680);
    rt(Fabric::phi, UseCase::ngj, 0.0, 96);
    rt(Fabric::gpu, UseCase::ngj, 0.0, 500);
    return {wrong == 0, fmt("%d/%d facts match", checked - wrong, checked)};
}

Outcome planner_properties() {
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> t(1e-6, 1e-3);
    std::uniform_int_distribution<std::uint64_t> size(96, 7680);
    const std::vector<std::uint64_t> grid{96, 480, 960, 3840, 7680};
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Calibration cal;
        for (auto f : kAllFabrics)
            for (auto uc : {UseCase::rgj, UseCase::sgj, UseCase::ngj})
                for (double d : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    if (uc == UseCase::ngj && d > 0.0) continue;
                    for (auto n : grid) cal.add(f, uc, d, n, t(rng));
                }
        std::vector<ExperimentSpec> batch;
        for (int i = 0; i < 8; ++i)
            batch.push_back({static_cast<UseCase>(i % 3), size(rng), 0.25 * static_cast<double>(1 + i % 4), false,
                             1.0 + 10.0 * t(rng) * 1e3});
        const auto r = plan(batch, cal);
        if (r.single_fabric.size() != 3) ++violations;
        for (const auto& c : r.single_fabric)
            if (r.total_seconds > c.total_seconds) ++violations;
    }

    Calibration two;
    two.add(Fabric::phi, UseCase::rgj, 1.0, 1000, 10.0);
    two.add(Fabric::gpu, UseCase::rgj, 1.0, 1000, 15.0);
    two.add(Fabric::phi, UseCase::rgj, 1.0, 2000, 20.0);
    two.add(Fabric::gpu, UseCase::rgj, 1.0, 2000, 5.0);
    const double one_step = kRealTimeStepSeconds;
    const auto r2 = plan({{UseCase::rgj, 1000, 1.0, false, one_step}, {UseCase::rgj, 2000, 1.0, false, one_step}}, two);
    double phi_pct = -1, gpu_pct = -1;
    for (const auto& c : r2.single_fabric) {
        if (c.fabric == Fabric::phi) phi_pct = c.time_saved_percent;
        if (c.fabric == Fabric::gpu) gpu_pct = c.time_saved_percent;
    }

    Calibration minute;
    for (auto f : kAllFabrics) {
        minute.add(f, UseCase::ngj, 0.0, 96, 60.0);
        minute.add(f, UseCase::ngj, 0.0, 960, 60.0);
    }
    bool energy_ok = true;
    for (auto f : kAllFabrics) {
        const auto r = plan({{UseCase::ngj, 100, 0.0, false, one_step}}, minute);
        for (const auto& c : r.single_fabric)
            if (c.fabric == f) energy_ok &= c.energy_joules == 60.0 * tdp_watts(f);
    }
    energy_ok &= tdp_watts(Fabric::dfe) == 140.0 && tdp_watts(Fabric::phi) == 225.0 && tdp_watts(Fabric::gpu) == 250.0;

    return {violations == 0 && phi_pct == 50.0 && gpu_pct == 25.0 && energy_ok,
            fmt("500 calibrations, %d dominance violations; two-experiment savings %.1f%%/%.1f%%; TDP energy %s",
                violations, phi_pct, gpu_pct, energy_ok ? "ok" : "wrong")};
}

Outcome disclosure() {
    // Absolute runtimes of the original accelerator boards are not reproduced.
    // What ships instead is the calibration path: measured times go in, and
    // every decision and plan total comes out of them.
    const auto cal = Calibration::from_csv_text(
        "fabric,use_case,density,n,sec_per_step\n"
        "DFE,sgj,1,96,3e-5\nDFE,sgj,1,960,3e-4\n"
        "GPU,sgj,1,96,6e-5\nGPU,sgj,1,960,1e-4\n");
    const auto small = select_fabric(classify({UseCase::sgj, 96, 1.0, false, 1.0}), &cal);
    const auto large = select_fabric(classify({UseCase::sgj, 900, 1.0, false, 1.0}), &cal);
    const auto r = plan({{UseCase::sgj, 96, 1.0, false, 1.0}}, cal);
    const bool ok = small.fabric == Fabric::dfe && large.fabric == Fabric::gpu &&
                    small.reason == "calibration-argmin" && r.total_seconds == 20000 * 3e-5;
    return {ok, "absolute runtimes and savings of the original hardware are not reproduced; "
                "calibration ingestion drives selection and planning"};
}

// ---- numerics ---------------------------------------------------------------

Outcome numerical_sanity() {
    std::mt19937_64 rng(100000);
    std::uniform_real_distribution<double> volt(-120.0, 80.0), gate(0.0, 1.0), cur(-100.0, 100.0),
        step(1e-4, 0.2);
    int out_of_bounds = 0;
    for (int i = 0; i < 100000; ++i) {
        NeuronState s;
        s.vdend = volt(rng);
        s.vsoma = volt(rng);
        s.vaxon = volt(rng);
        for (auto& g : s.gates) g = gate(rng);
        const auto next = cell_update(s, kDefaultConductances, cur(rng), cur(rng), step(rng)).state;
        for (double g : next.gates)
            if (!(g >= 0.0 && g <= 1.0)) ++out_of_bounds;
    }

    // Subthreshold drive over 100 steps of the coarsest dt; error against the
    // next finer run at each level.
    auto final_state = [](double dt, int steps) {
        NeuronState s = default_initial_state();
        for (int k = 0; k < steps; ++k) s = cell_update(s, kDefaultConductances, 0.0, 1.0, dt).state;
        return s;
    };
    auto distance = [](const NeuronState& a, const NeuronState& b) {
        double d = std::max({std::abs(a.vdend - b.vdend), std::abs(a.vsoma - b.vsoma), std::abs(a.vaxon - b.vaxon)});
        for (std::size_t i = 0; i < a.gates.size(); ++i) d = std::max(d, std::abs(a.gates[i] - b.gates[i]));
        return d;
    };
    const double dt = kDefaultDtMs;
    const auto y1 = final_state(dt, 100), y2 = final_state(dt / 2, 200), y4 = final_state(dt / 4, 400);
    const double order = std::log2(distance(y1, y2) / distance(y2, y4));
    return {out_of_bounds == 0 && order >= 0.9,
            fmt("1e5 states, %d gates out of [0,1]; observed order %.3f", out_of_bounds, order)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"flop-model fidelity", false, flop_fidelity},
        {"formula suite", false, formula_suite},
        {"ratio properties", true, ratio_properties},
        {"synchrony experiment", false, synchrony},
        {"backend equivalence", false, backend_equivalence},
        {"selector conformance", false, selector_conformance},
        {"planner properties", false, planner_properties},
        {"non-reproducible disclosure", false, disclosure},
        {"numerical sanity", false, numerical_sanity},
    };
    int unexpected = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::string line = std::string(o.pass ? "PASS" : "FAIL") + " " + c.name + ": " + o.detail;
        if (!o.pass && c.known_deviation) line += " [known deviation]";
        if (!o.pass && !c.known_deviation) ++unexpected;
        std::printf("%s\n", line.c_str());
        std::fflush(stdout);
    }
    return unexpected;
}
