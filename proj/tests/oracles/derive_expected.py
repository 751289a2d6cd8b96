#!/usr/bin/env python3
"""Independent reference values for the C++ test suites.

Everything here is recomputed from first principles in plain Python (no
shared code with the library) and written to expected.json next to this
script. The JSON file is committed; rerun this script only when a model
definition changes on purpose.

    python3 tests/oracles/derive_expected.py
"""

import json
import math
import pathlib
import random

MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------- workload

CELL = 859
GJ_TERM = {"rgj": 12, "sgj": 4, "ngj": 0}
ACCESS_PER_CELL = 19 + 1 + 20 + 1


def connections(case, n, c):
    if case == "ngj":
        return 0
    # round half away from zero on a non-negative value
    return int(math.floor(n * n * c + 0.5))


def flops_by_items(case, n, c):
    """Literal line-item sum: one cell update per neuron, one GJ term per edge."""
    total = 0
    for _ in range(n):
        total += CELL
    for _ in range(connections(case, n, c)):
        total += GJ_TERM[case]
    return total


def accesses_by_items(case, n, c):
    total = 0
    for _ in range(n):
        total += ACCESS_PER_CELL
    for _ in range(connections(case, n, c)):
        total += 1
    return total


def formula_cases(count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        case = rng.choice(["rgj", "sgj", "ngj"])
        n = rng.randint(1, 7680)
        c = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0, round(rng.random(), 6)])
        out.append({"case": case, "n": n, "density": c,
                    "flops": flops_by_items(case, n, c),
                    "accesses": accesses_by_items(case, n, c)})
    return out


def dfe_ticks(case, n, unroll=8, depth=100):
    if case == "ngj":
        return n + depth
    return n * -(-n // unroll) + depth


# ------------------------------------------------------------------- RNG

def splitmix64(seed):
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class MT19937_64:
    NN, MM = 312, 156
    MATRIX_A = 0xB5026F5AA96619E9
    UM, LM = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.NN
        self.mt[0] = seed & MASK64
        for i in range(1, self.NN):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK64
        self.mti = self.NN

    def _twist(self):
        mt = self.mt
        for i in range(self.NN):
            x = (mt[i] & self.UM) | (mt[(i + 1) % self.NN] & self.LM)
            xa = x >> 1
            if x & 1:
                xa ^= self.MATRIX_A
            mt[i] = mt[(i + self.MM) % self.NN] ^ xa
        self.mti = 0

    def next(self):
        if self.mti >= self.NN:
            self._twist()
        x = self.mt[self.mti]
        self.mti += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & MASK64


def stream(seed):
    return MT19937_64(splitmix64(seed))


def uniform01(gen):
    return (gen.next() >> 11) * 2.0 ** -53


def fixed_density_mask(n, p, seed):
    gen = stream(seed)
    return [[uniform01(gen) < p for _ in range(n)] for _ in range(n)]


# ------------------------------------------------------------ cell model

G = dict(g_na=(60.0, 120.0, 120.0), g_k=(18.0, 36.0, 36.0), g_l=(0.3, 0.3, 0.3),
         e_na=50.0, e_k=-77.0, e_l=-54.387, cm=(1.0, 1.0, 1.0), g_ds=0.5, g_sa=1.0)


def vtrap(x, y):
    r = x / y
    if abs(r) < 1e-6:
        return y * (1.0 - r / 2.0)
    return x / (math.exp(r) - 1.0)


def rates(v):
    am = 0.1 * vtrap(-(v + 40.0), 10.0)
    bm = 4.0 * math.exp(-(v + 65.0) / 18.0)
    ah = 0.07 * math.exp(-(v + 65.0) / 20.0)
    bh = 1.0 / (math.exp(-(v + 35.0) / 10.0) + 1.0)
    an = 0.01 * vtrap(-(v + 55.0), 10.0)
    bn = 0.125 * math.exp(-(v + 65.0) / 80.0)
    return (am, bm), (ah, bh), (an, bn)


def relax(g, ab, dt):
    a, b = ab
    tot = a + b
    g = g + (a / tot - g) * -math.expm1(-dt * tot)
    return min(max(g, 0.0), 1.0)


def steady_state(v):
    return [a / (a + b) for (a, b) in rates(v)]


def initial(v=-65.0):
    """[vd, vs, va, gates(d m h n, s m h n, a m h n)]"""
    gates = steady_state(v) * 3
    return [v, v, v] + gates


def step(state, i_gj, i_ev, dt):
    v = state[0:3]
    gates = state[3:12]
    ion = []
    for c in range(3):
        m, h, n = gates[3 * c: 3 * c + 3]
        ion.append(G["g_na"][c] * m ** 3 * h * (v[c] - G["e_na"])
                   + G["g_k"][c] * n ** 4 * (v[c] - G["e_k"])
                   + G["g_l"][c] * (v[c] - G["e_l"]))
    i_d = -ion[0] + G["g_ds"] * (v[1] - v[0]) + i_gj + i_ev
    i_s = -ion[1] + G["g_ds"] * (v[0] - v[1]) + G["g_sa"] * (v[2] - v[1])
    i_a = -ion[2] + G["g_sa"] * (v[1] - v[2])
    nv = [v[0] + dt * i_d / G["cm"][0], v[1] + dt * i_s / G["cm"][1], v[2] + dt * i_a / G["cm"][2]]
    ng = []
    for c in range(3):
        r = rates(v[c])
        for k in range(3):
            ng.append(relax(gates[3 * c + k], r[k], dt))
    return nv + ng


def trajectory(steps, amp, pulse, dt=0.05):
    s = initial()
    out = []
    for k in range(steps):
        i_ev = amp if pulse[0] <= k < pulse[1] else 0.0
        s = step(s, 0.0, i_ev, dt)
        out.append(s[2])
    return s, out


def rgj_current(prev, neigh, w):
    ic = 0.0
    for x, wi in zip(neigh, w):
        v = prev - x
        f = 0.8 * v * math.exp(-1 * v * v / 100) + 0.2
        ic = ic + wi * f * v
    return ic


def sgj_current(prev, neigh, w):
    ic = 0.0
    for x, wi in zip(neigh, w):
        ic = ic + wi * (x - prev)
    return ic


# ---------------------------------------------------------------- planner

def two_experiment_plan():
    f1, f2 = [10.0, 20.0], [15.0, 5.0]
    best = sum(min(a, b) for a, b in zip(f1, f2))
    return {"best_total_s": best,
            "saved_vs_f1_percent": 100.0 * (sum(f1) - best) / sum(f1),
            "saved_vs_f2_percent": 100.0 * (sum(f2) - best) / sum(f2)}


def main():
    exp = {}
    exp["profile_rgj_96"] = {
        "flops": flops_by_items("rgj", 96, 1.0),
        "gj_flops": 12 * connections("rgj", 96, 1.0),
        "gj_fraction": 12 * connections("rgj", 96, 1.0) / flops_by_items("rgj", 96, 1.0),
        "accesses": accesses_by_items("rgj", 96, 1.0),
    }
    exp["formula_cases"] = formula_cases(200, seed=20240601)
    exp["dfe_ticks"] = [{"case": c, "n": n, "ticks": dfe_ticks(c, n)}
                        for c in ("rgj", "sgj", "ngj") for n in (96, 100, 960, 7680)]

    gen = stream(7)
    exp["rng_seed7_first_u64"] = [str(gen.next()) for _ in range(5)]
    gen = stream(0)
    exp["rng_seed0_first_uniform"] = [uniform01(gen) for _ in range(5)]
    mask = fixed_density_mask(1000, 0.5, 7)
    exp["fixed_density_0p5_seed7_n1000_nonzero"] = sum(sum(r) for r in mask)
    mask = fixed_density_mask(6, 0.3, 11)
    exp["fixed_density_0p3_seed11_n6_mask"] = [[int(x) for x in r] for r in mask]

    final, vaxon = trajectory(400, 10.0, (50, 250))
    exp["cell_trajectory"] = {
        "start_mv": -65.0, "steps": 400, "pulse": [50, 250, 10.0], "dt": 0.05,
        "vaxon_every_50": vaxon[49::50], "final_state": final,
    }
    neigh = [-65.0, -60.0, -70.0, -20.0, 10.0, -65.0]
    w = [0.04, 0.1, 0.2, 0.05, 0.01, 0.3]
    exp["gj_currents"] = {"prev": -64.0, "neighbors": neigh, "weights": w,
                          "rgj": rgj_current(-64.0, neigh, w),
                          "sgj": sgj_current(-64.0, neigh, w)}
    exp["planner_two_experiment"] = two_experiment_plan()
    exp["steps_40_brain_seconds"] = round(40 / 50e-6)

    path = pathlib.Path(__file__).with_name("expected.json")
    path.write_text(json.dumps(exp, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
