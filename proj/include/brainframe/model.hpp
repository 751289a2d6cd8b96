#pragma once

// Cell and gap-junction kernels.
//
// The cell is a three-compartment (dendrite, soma, axon) Hodgkin-Huxley
// surrogate. Every compartment carries the standard Na/K/leak currents with
// the classic squid-axon rate functions (mV, ms); neighbouring compartments
// are joined by linear coupling conductances. Voltages advance by forward
// Euler. Gates advance by the exponential-Euler update of their linear ODE,
// which is first order like forward Euler and keeps every gate inside [0,1]
// for any finite voltage.
//
// The kernels are templates over the scalar type so the same code serves the
// double reference path, the float performance path and the op-counting
// build (CountingReal).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

#include "brainframe/error.hpp"

namespace brainframe {

inline constexpr double kDefaultDtMs = 0.05;

enum class UseCase { rgj, sgj, ngj };

std::string_view to_string(UseCase use_case) noexcept;
// Accepts rgj/sgj/ngj in any case. Throws ConfigError otherwise.
UseCase parse_use_case(std::string_view text);

enum class Compartment : std::size_t { dendrite = 0, soma = 1, axon = 2 };

// Per-cell state: three membrane voltages, nine gates (m, h, n per
// compartment, dendrite first) and seven reserved slots that stay 0.
template <typename Real>
struct BasicNeuronState {
    static constexpr std::size_t scalar_count = 19;
    static constexpr std::size_t gate_count = 9;

    Real vdend{};
    Real vsoma{};
    Real vaxon{};
    std::array<Real, gate_count> gates{};
    std::array<Real, 7> reserved{};

    Real& m(Compartment c) { return gates[3 * static_cast<std::size_t>(c)]; }
    Real& h(Compartment c) { return gates[3 * static_cast<std::size_t>(c) + 1]; }
    Real& n(Compartment c) { return gates[3 * static_cast<std::size_t>(c) + 2]; }
    const Real& m(Compartment c) const { return gates[3 * static_cast<std::size_t>(c)]; }
    const Real& h(Compartment c) const { return gates[3 * static_cast<std::size_t>(c) + 1]; }
    const Real& n(Compartment c) const { return gates[3 * static_cast<std::size_t>(c) + 2]; }

    Real& voltage(Compartment c) {
        switch (c) {
        case Compartment::dendrite: return vdend;
        case Compartment::soma: return vsoma;
        default: return vaxon;
        }
    }
    const Real& voltage(Compartment c) const {
        return const_cast<BasicNeuronState*>(this)->voltage(c);
    }

    template <typename Other>
    BasicNeuronState<Other> cast() const {
        BasicNeuronState<Other> out;
        out.vdend = Other(static_cast<double>(vdend));
        out.vsoma = Other(static_cast<double>(vsoma));
        out.vaxon = Other(static_cast<double>(vaxon));
        for (std::size_t i = 0; i < gate_count; ++i) out.gates[i] = Other(static_cast<double>(gates[i]));
        return out;
    }

    friend bool operator==(const BasicNeuronState&, const BasicNeuronState&) = default;
};

using NeuronState = BasicNeuronState<double>;
static_assert(sizeof(NeuronState) == NeuronState::scalar_count * sizeof(double));

// Twenty per-cell parameters: channel conductances (mS/cm^2), reversal
// potentials (mV), capacitances (uF/cm^2), inter-compartment coupling
// (mS/cm^2) and a per-compartment shift of the gating curves (mV).
struct ConductanceSet {
    static constexpr std::size_t count = 20;

    double g_na_dend = 60.0;
    double g_k_dend = 18.0;
    double g_leak_dend = 0.3;
    double g_na_soma = 120.0;
    double g_k_soma = 36.0;
    double g_leak_soma = 0.3;
    double g_na_axon = 120.0;
    double g_k_axon = 36.0;
    double g_leak_axon = 0.3;
    double e_na = 50.0;
    double e_k = -77.0;
    double e_leak = -54.387;
    double cm_dend = 1.0;
    double cm_soma = 1.0;
    double cm_axon = 1.0;
    double g_dend_soma = 0.5;
    double g_soma_axon = 1.0;
    double shift_dend = 0.0;
    double shift_soma = 0.0;
    double shift_axon = 0.0;

    std::array<double, count> values() const;
    static ConductanceSet from_values(std::span<const double, count> values);

    // Conductances must be >= 0 and capacitances > 0; every entry finite.
    void validate() const;

    friend bool operator==(const ConductanceSet&, const ConductanceSet&) = default;
};
static_assert(sizeof(ConductanceSet) == ConductanceSet::count * sizeof(double));

inline const ConductanceSet kDefaultConductances{};

namespace kernel {

template <typename Real>
struct GateRates {
    Real alpha;
    Real beta;
};

// x / (exp(x/y) - 1), continued through the removable singularity at x = 0.
template <typename Real>
Real vtrap(Real x, Real y) {
    using std::abs;
    using std::exp;
    const Real r = x / y;
    if (abs(r) < Real(1e-6)) return y * (Real(1.0) - r / Real(2.0));
    return x / (exp(r) - Real(1.0));
}

template <typename Real>
GateRates<Real> rates_m(Real v) {
    using std::exp;
    return {Real(0.1) * vtrap(-(v + Real(40.0)), Real(10.0)),
            Real(4.0) * exp(-(v + Real(65.0)) / Real(18.0))};
}

template <typename Real>
GateRates<Real> rates_h(Real v) {
    using std::exp;
    return {Real(0.07) * exp(-(v + Real(65.0)) / Real(20.0)),
            Real(1.0) / (exp(-(v + Real(35.0)) / Real(10.0)) + Real(1.0))};
}

template <typename Real>
GateRates<Real> rates_n(Real v) {
    using std::exp;
    return {Real(0.01) * vtrap(-(v + Real(55.0)), Real(10.0)),
            Real(0.125) * exp(-(v + Real(65.0)) / Real(80.0))};
}

// Exact solution of dg/dt = alpha (1 - g) - beta g over dt with frozen rates.
// Written as g + (g_inf - g) * (1 - e^{-dt (alpha+beta)}) so that dt = 0
// returns g bit for bit.
template <typename Real>
Real relax_gate(Real g, GateRates<Real> r, Real dt) {
    using std::expm1;
    const Real total = r.alpha + r.beta;
    const Real target = r.alpha / total;
    const Real weight = -expm1(-dt * total);
    return std::clamp(g + (target - g) * weight, Real(0.0), Real(1.0));
}

template <typename Real>
Real ionic_current(Real v, Real m, Real h, Real n, Real g_na, Real g_k, Real g_leak, Real e_na,
                   Real e_k, Real e_leak) {
    return g_na * m * m * m * h * (v - e_na) + g_k * n * n * n * n * (v - e_k) +
           g_leak * (v - e_leak);
}

// One realistic gap-junction term, accumulated into ic exactly as
//   V = prev - neigh; f = 0.8*V*exp(-1*V*V/100) + 0.2; Ic = Ic + C*f*V
template <typename Real>
Real accumulate_realistic(Real ic, Real prev_vdend, Real neighbor_vdend, Real weight) {
    using std::exp;
    const Real v = prev_vdend - neighbor_vdend;
    const Real f = Real(0.8) * v * exp(Real(-1.0) * v * v / Real(100.0)) + Real(0.2);
    return ic + weight * f * v;
}

// One simplified term: Ic = Ic + w * (neigh - prev).
template <typename Real>
Real accumulate_simplified(Real ic, Real prev_vdend, Real neighbor_vdend, Real weight) {
    return ic + weight * (neighbor_vdend - prev_vdend);
}

// Forward-Euler step without input validation. i_gj and i_evoked are inward
// currents (positive depolarises) applied to the dendrite only.
template <typename Real>
BasicNeuronState<Real> cell_update_unchecked(const BasicNeuronState<Real>& s,
                                             const ConductanceSet& c, Real i_gj, Real i_evoked,
                                             Real dt) {
    const Real e_na(c.e_na), e_k(c.e_k), e_leak(c.e_leak);
    const Real g_ds(c.g_dend_soma), g_sa(c.g_soma_axon);
    constexpr auto dend = Compartment::dendrite;
    constexpr auto soma = Compartment::soma;
    constexpr auto axon = Compartment::axon;

    const Real ion_dend = ionic_current(s.vdend, s.m(dend), s.h(dend), s.n(dend), Real(c.g_na_dend),
                                        Real(c.g_k_dend), Real(c.g_leak_dend), e_na, e_k, e_leak);
    const Real ion_soma = ionic_current(s.vsoma, s.m(soma), s.h(soma), s.n(soma), Real(c.g_na_soma),
                                        Real(c.g_k_soma), Real(c.g_leak_soma), e_na, e_k, e_leak);
    const Real ion_axon = ionic_current(s.vaxon, s.m(axon), s.h(axon), s.n(axon), Real(c.g_na_axon),
                                        Real(c.g_k_axon), Real(c.g_leak_axon), e_na, e_k, e_leak);

    const Real i_dend = -ion_dend + g_ds * (s.vsoma - s.vdend) + i_gj + i_evoked;
    const Real i_soma = -ion_soma + g_ds * (s.vdend - s.vsoma) + g_sa * (s.vaxon - s.vsoma);
    const Real i_axon = -ion_axon + g_sa * (s.vsoma - s.vaxon);

    BasicNeuronState<Real> out = s;
    out.vdend = s.vdend + dt * (i_dend / Real(c.cm_dend));
    out.vsoma = s.vsoma + dt * (i_soma / Real(c.cm_soma));
    out.vaxon = s.vaxon + dt * (i_axon / Real(c.cm_axon));

    const std::array<Real, 3> shift{Real(c.shift_dend), Real(c.shift_soma), Real(c.shift_axon)};
    for (auto comp : {dend, soma, axon}) {
        const Real v = s.voltage(comp) - shift[static_cast<std::size_t>(comp)];
        out.m(comp) = relax_gate(s.m(comp), rates_m(v), dt);
        out.h(comp) = relax_gate(s.h(comp), rates_h(v), dt);
        out.n(comp) = relax_gate(s.n(comp), rates_n(v), dt);
    }
    return out;
}

template <typename Real>
bool is_finite(const BasicNeuronState<Real>& s) {
    using std::isfinite;
    if (!isfinite(s.vdend) || !isfinite(s.vsoma) || !isfinite(s.vaxon)) return false;
    for (const auto& g : s.gates)
        if (!isfinite(g)) return false;
    return true;
}

} // namespace kernel

// Realistic gap-junction current. Accumulates in index order.
// Throws InputShapeError when the spans differ in length.
double gj_current_realistic(double prev_vdend, std::span<const double> neighbor_vdends,
                            std::span<const double> weights);

// Simplified gap-junction current, sum of w_i * (neighbor_i - prev).
double gj_current_simplified(double prev_vdend, std::span<const double> neighbor_vdends,
                             std::span<const double> weights);

struct CellUpdate {
    NeuronState state;
    double axon_voltage;
};

// One forward-Euler step of the cell. Throws NumericDomainError on
// non-finite state, inputs or dt, and on dt < 0.
CellUpdate cell_update(const NeuronState& state, const ConductanceSet& cond, double i_gj,
                       double i_evoked, double dt = kDefaultDtMs);

// Steady-state gate values at a fixed voltage.
NeuronState state_at_voltage(double v_mv, const ConductanceSet& cond = kDefaultConductances);

// Iterates the zero-input kernel from the -65 mV steady state until no
// scalar moves by more than tol in one step. Throws NumericDomainError if
// max_steps is reached first.
NeuronState resting_state(const ConductanceSet& cond = kDefaultConductances, double tol = 1e-13,
                          std::size_t max_steps = 2'000'000, double dt = kDefaultDtMs);

// Resting state of the default conductances (computed once).
const NeuronState& default_initial_state();

} // namespace brainframe
