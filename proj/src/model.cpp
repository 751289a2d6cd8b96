#include "brainframe/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace brainframe {

std::string_view to_string(UseCase use_case) noexcept {
    switch (use_case) {
    case UseCase::rgj: return "rgj";
    case UseCase::sgj: return "sgj";
    case UseCase::ngj: return "ngj";
    }
    return "?";
}

UseCase parse_use_case(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "rgj") return UseCase::rgj;
    if (lower == "sgj") return UseCase::sgj;
    if (lower == "ngj") return UseCase::ngj;
    throw ConfigError("unknown use case '" + std::string(text) + "' (expected rgj, sgj or ngj)");
}

std::array<double, ConductanceSet::count> ConductanceSet::values() const {
    return {g_na_dend, g_k_dend,  g_leak_dend, g_na_soma,   g_k_soma,    g_leak_soma, g_na_axon,
            g_k_axon,  g_leak_axon, e_na,      e_k,         e_leak,      cm_dend,     cm_soma,
            cm_axon,   g_dend_soma, g_soma_axon, shift_dend, shift_soma, shift_axon};
}

ConductanceSet ConductanceSet::from_values(std::span<const double, count> v) {
    ConductanceSet c;
    c.g_na_dend = v[0];
    c.g_k_dend = v[1];
    c.g_leak_dend = v[2];
    c.g_na_soma = v[3];
    c.g_k_soma = v[4];
    c.g_leak_soma = v[5];
    c.g_na_axon = v[6];
    c.g_k_axon = v[7];
    c.g_leak_axon = v[8];
    c.e_na = v[9];
    c.e_k = v[10];
    c.e_leak = v[11];
    c.cm_dend = v[12];
    c.cm_soma = v[13];
    c.cm_axon = v[14];
    c.g_dend_soma = v[15];
    c.g_soma_axon = v[16];
    c.shift_dend = v[17];
    c.shift_soma = v[18];
    c.shift_axon = v[19];
    return c;
}

void ConductanceSet::validate() const {
    for (double v : values())
        if (!std::isfinite(v)) throw ConfigError("conductance set contains a non-finite value");
    for (double g : {g_na_dend, g_k_dend, g_leak_dend, g_na_soma, g_k_soma, g_leak_soma, g_na_axon,
                     g_k_axon, g_leak_axon, g_dend_soma, g_soma_axon})
        if (g < 0.0) throw ConfigError("conductances must be non-negative");
    for (double cm : {cm_dend, cm_soma, cm_axon})
        if (!(cm > 0.0)) throw ConfigError("membrane capacitance must be positive");
}

namespace {

template <typename Accumulate>
double accumulate_gj(double prev, std::span<const double> neigh, std::span<const double> w,
                     Accumulate term) {
    if (neigh.size() != w.size())
        throw InputShapeError("gap junction inputs differ in length: " +
                              std::to_string(neigh.size()) + " voltages, " +
                              std::to_string(w.size()) + " weights");
    double ic = 0.0;
    for (std::size_t i = 0; i < neigh.size(); ++i) ic = term(ic, prev, neigh[i], w[i]);
    return ic;
}

} // namespace

double gj_current_realistic(double prev_vdend, std::span<const double> neighbor_vdends,
                            std::span<const double> weights) {
    return accumulate_gj(prev_vdend, neighbor_vdends, weights,
                         kernel::accumulate_realistic<double>);
}

double gj_current_simplified(double prev_vdend, std::span<const double> neighbor_vdends,
                             std::span<const double> weights) {
    return accumulate_gj(prev_vdend, neighbor_vdends, weights,
                         kernel::accumulate_simplified<double>);
}

CellUpdate cell_update(const NeuronState& state, const ConductanceSet& cond, double i_gj,
                       double i_evoked, double dt) {
    if (!kernel::is_finite(state)) throw NumericDomainError("cell_update: non-finite state");
    if (!std::isfinite(i_gj) || !std::isfinite(i_evoked))
        throw NumericDomainError("cell_update: non-finite input current");
    if (!std::isfinite(dt) || dt < 0.0)
        throw NumericDomainError("cell_update: dt must be finite and non-negative");
    auto next = kernel::cell_update_unchecked(state, cond, i_gj, i_evoked, dt);
    return {next, next.vaxon};
}

NeuronState state_at_voltage(double v_mv, const ConductanceSet& cond) {
    NeuronState s;
    s.vdend = s.vsoma = s.vaxon = v_mv;
    const std::array<double, 3> shift{cond.shift_dend, cond.shift_soma, cond.shift_axon};
    for (auto comp : {Compartment::dendrite, Compartment::soma, Compartment::axon}) {
        const double v = v_mv - shift[static_cast<std::size_t>(comp)];
        auto steady = [](kernel::GateRates<double> r) { return r.alpha / (r.alpha + r.beta); };
        s.m(comp) = steady(kernel::rates_m(v));
        s.h(comp) = steady(kernel::rates_h(v));
        s.n(comp) = steady(kernel::rates_n(v));
    }
    return s;
}

NeuronState resting_state(const ConductanceSet& cond, double tol, std::size_t max_steps, double dt) {
    cond.validate();
    NeuronState s = state_at_voltage(-65.0, cond);
    for (std::size_t i = 0; i < max_steps; ++i) {
        const NeuronState next = kernel::cell_update_unchecked(s, cond, 0.0, 0.0, dt);
        if (!kernel::is_finite(next)) throw NumericDomainError("resting_state: iteration diverged");
        double delta = std::max({std::fabs(next.vdend - s.vdend), std::fabs(next.vsoma - s.vsoma),
                                 std::fabs(next.vaxon - s.vaxon)});
        for (std::size_t g = 0; g < NeuronState::gate_count; ++g)
            delta = std::max(delta, std::fabs(next.gates[g] - s.gates[g]));
        s = next;
        if (delta <= tol) return s;
    }
    throw NumericDomainError("resting_state: no convergence within the step budget");
}

const NeuronState& default_initial_state() {
    static const NeuronState state = resting_state();
    return state;
}

} // namespace brainframe
