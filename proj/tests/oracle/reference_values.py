#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Independent numpy re-implementation that produces the reference numbers
frozen into the C++ tests. Run it with `python3 reference_values.py`; the
printed values are copied verbatim into tests/reference_values.hpp.

Nothing here imports or calls the C++ code.
"""
import math

import numpy as np

TABLE1 = dict(
    I=3, K=4, J=3, M=16, N=50, delta=1.0, r_rsu=250.0, d_rsu=500.0, d_lane=4.0,
    v=[25.0, 27.0, 30.0], t_arrival=[0.0, 5.0, 20.0, 20.0], lane_of=[1, 2, 3, 2],
    q0=(250.0, 10.0, 20.0), qf=(1250.0, 10.0, 20.0), H_U=20.0, V_max=40.0,
    h0_db=0.0, h1_db=20.0, d_M=0.05, lam=0.1, sigma2_dbw=-70.0, eps2_dbw=-70.0,
    zeta=0.97, E_th_dbm=-50.0, P_max_dbm=29.0, d_ref=1.0,
)


def lin(db):
    return 10.0 ** (db / 10.0)


def watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def vehicle(c, k, n):
    lane = c["lane_of"][k]
    return c["v"][lane - 1] * ((n + 1) * c["delta"] - c["t_arrival"][k]), c["d_lane"] * (lane - 1)


def server(c, k, n):
    x, _ = vehicle(c, k, n)
    if x < 0:
        return -1
    best, bd = -1, None
    for i in range(c["I"]):
        d = abs(x - (c["r_rsu"] + i * c["d_rsu"]))
        if d <= c["r_rsu"] and (bd is None or d < bd):
            best, bd = i, d
    return best


def straight(c):
    q0, qf, N = np.array(c["q0"]), np.array(c["qf"]), c["N"]
    return [q0 + (qf - q0) * n / (N - 1) for n in range(N)]


def geometry(c, n, a):
    rsu = [np.array([c["r_rsu"] + i * c["d_rsu"], 0.0, 0.0]) for i in range(c["I"])]
    veh = [np.array([*vehicle(c, k, n), 0.0]) for k in range(c["K"])]
    return rsu, veh


def phases(c, n, a):
    rsu, veh = geometry(c, n, a)
    served = {i: [k for k in range(c["K"]) if server(c, k, n) == i] for i in range(c["I"])}
    cands = [i for i in range(c["I"]) if served[i]]
    if not cands:
        return np.zeros(c["M"])
    i = min(cands, key=lambda i: (np.linalg.norm(a - rsu[i]), i))
    direct = lambda k: max(c["d_ref"], np.linalg.norm(rsu[i][:2] - veh[k][:2]))
    k = served[i][0]
    for kk in served[i]:
        if direct(kk) > direct(k):
            k = kk
    cin = (rsu[i][0] - a[0]) / np.linalg.norm(rsu[i] - a)
    cout = (veh[k][0] - a[0]) / np.linalg.norm(veh[k] - a)
    m = np.arange(c["M"])
    return np.mod(2 * math.pi / c["lam"] * c["d_M"] * m * (cin - cout), 2 * math.pi)


def gain2(c, n, i, k, a, theta):
    rsu, veh = geometry(c, n, a)
    dd = max(c["d_ref"], np.linalg.norm(rsu[i][:2] - veh[k][:2]))
    h = math.sqrt(lin(c["h0_db"])) / dd + 0j
    d1 = np.linalg.norm(rsu[i] - a)
    d2 = np.linalg.norm(veh[k] - a)
    cin = (rsu[i][0] - a[0]) / d1
    cout = (veh[k][0] - a[0]) / d2
    m = np.arange(c["M"])
    kd = 2 * math.pi / c["lam"] * c["d_M"]
    g = math.sqrt(lin(c["h1_db"])) / d2 * np.exp(-1j * kd * m * cout)
    hr = math.sqrt(lin(c["h1_db"])) / d1 * np.exp(-1j * kd * m * cin)
    h += np.sum(np.conj(g) * np.exp(1j * theta) * hr)
    return abs(h) ** 2


def table1_initial():
    c = TABLE1
    P = watts(c["P_max_dbm"])
    s2, e2, rho = lin(c["sigma2_dbw"]), lin(c["eps2_dbw"]), 0.5
    q = straight(c)
    total, energy, common_min = 0.0, np.zeros(c["K"]), 0.0
    for n in range(c["N"]):
        th = phases(c, n, q[n])
        for i in range(c["I"]):
            ks = [k for k in range(c["K"]) if server(c, k, n) == i]
            if not ks:
                continue
            pc, pp = 0.5 * P, 0.5 * P / len(ks)
            rcs = []
            for k in ks:
                g = gain2(c, n, i, k, q[n], th)
                rp = math.log2(1 + rho * pp * g / (rho * ((len(ks) - 1) * pp * g + s2) + e2))
                rcs.append(math.log2(1 + rho * pc * g / (rho * (len(ks) * pp * g + s2) + e2)))
                total += rp
                energy[k] += c["zeta"] * (1 - rho) * P * g * c["delta"]
            common_min += min(rcs)
    return total, energy, common_min


TOY = dict(TABLE1)
TOY.update(I=1, J=1, K=1, N=4, v=[25.0], t_arrival=[0.0], lane_of=[1],
           q0=(150.0, 10.0, 20.0), qf=(250.0, 10.0, 20.0), E_th_dbm=20.0)


def toy_grid(step=5.0, pstep=0.05, rstep=0.01):
    """Lattice optimum of the toy. With one vehicle the common plus private
    rate only depends on the total power, and both rate and harvested energy
    increase with it, so full power is optimal at every lattice point; the
    power lattice still contains P_max exactly."""
    c = TOY
    P = watts(c["P_max_dbm"])
    s2, e2, Eth = lin(c["sigma2_dbw"]), lin(c["eps2_dbw"]), watts(c["E_th_dbm"])
    reach = c["V_max"] * c["delta"]
    q0, qf = np.array(c["q0"][:2]), np.array(c["qf"][:2])
    span = int(math.floor(reach * 2 / step + 1e-9))
    pts = {1: [], 2: []}
    for n in (1, 2):
        r0 = reach * n
        for a in range(-span, span + 1):
            for b in range(-span, span + 1):
                p = q0 + np.array([a * step, b * step])
                if (np.linalg.norm(p - q0) <= r0 + 1e-9 and
                        np.linalg.norm(p - qf) <= reach * (c["N"] - 1 - n) + 1e-9):
                    pts[n].append(p)

    def aligned(n, xy):
        a = np.array([xy[0], xy[1], c["H_U"]])
        return gain2(c, n, 0, 0, a, phases(c, n, a))

    g0 = aligned(0, q0)
    g3 = aligned(3, qf)
    g1 = [aligned(1, p) for p in pts[1]]
    g2 = [aligned(2, p) for p in pts[2]]
    best = -1.0
    best_rho = None
    for r in range(int(round(1 / rstep)) + 1):
        rho = min(1.0, r * rstep)
        den = rho * s2 + e2
        f = lambda g: math.log2(1 + rho * P * g / den)
        e = lambda g: c["zeta"] * (1 - rho) * P * g * c["delta"]
        for j1, p1 in enumerate(pts[1]):
            for j2, p2 in enumerate(pts[2]):
                if np.linalg.norm(p1 - p2) > reach + 1e-9:
                    continue
                gs = (g0, g1[j1], g2[j2], g3)
                if sum(e(g) for g in gs) < Eth:
                    continue
                val = sum(f(g) for g in gs)
                if val > best:
                    best, best_rho = val, rho
    return best, best_rho


if __name__ == "__main__":
    total, energy, cmin = table1_initial()
    print(f"table1_initial_private_sum = {total:.15g}")
    print(f"table1_initial_common_min_sum = {cmin:.15g}")
    for k, e in enumerate(energy):
        print(f"table1_initial_energy[{k}] = {e:.15g}")
    # steering phase of the second element (index 1) for lambda 0.1, d_M 0.05, cos 1
    print(f"steering_phase = {-(2 * math.pi / 0.1) * 1 * 0.05 * 1.0:.15g}")
    print(f"optimal_phase_second = {(2 * math.pi / 0.1) * 1 * 0.05 * 0.5:.15g}")
    print(f"aligned_example = {1.0 / 100 + 100 * 16 / 2500:.15g}")
    best, rho = toy_grid()
    print(f"toy_grid_optimum = {best:.15g} at rho {rho}")
