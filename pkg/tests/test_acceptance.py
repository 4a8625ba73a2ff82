"""Acceptance criteria, one test each.

Every test appends a ``PASS``/``FAIL criterion N: ...`` line with the measured
values; the lines are printed in the terminal summary. Reference values come
from the independent dense trapezoid oracle in ``conftest`` or from closed
forms, not from the package's own validation module.
"""
import math
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

import conftest
from conftest import surface_sigma
from qbattery.approx import compare_approaches
from qbattery.device import transmission
from qbattery.leads import ReservoirState
from qbattery.quadrature import spectral_weight
from qbattery.scenarios import Grid, SweepConfig, optimize_exergy, run_point, run_sweep
from qbattery.thermo import ne_entropy, thermo_record
from qbattery.transport import transport_record

pytestmark = pytest.mark.acceptance

BASE = SweepConfig()
GRID_5x5 = [(float(m), float(t)) for m in np.linspace(-0.5, 0.5, 5) for t in np.linspace(-0.05, 0.2, 5)]


def record(n, ok, text):
    conftest.ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {text}")
    assert ok, text


def test_criterion_01_equilibrium_nullity():
    row = run_point(BASE.junction())
    values = {k: getattr(row, k) for k in ("I_Q", "J_E", "J_H_L", "J_H_R", "sigma", "W_ext_beta")}
    worst = max(abs(v) for v in values.values())
    record(1, worst < 1e-10, f"equilibrium nullity, max |value| = {worst:.3g} (< 1e-10)")


def test_criterion_02_spectral_sum_rule():
    weights = [spectral_weight(BASE.junction(eps_qb=e)).value for e in (-0.5, -0.2, 0.1, 0.4, 0.7)]
    dev = max(abs(w - 1) for w in weights)
    record(2, dev <= 1e-6, f"spectral sum rule, max |int A - 1| = {dev:.3g} (<= 1e-6)")


def test_criterion_03_equilibrium_entropy_curve():
    eps = np.linspace(-0.5, 0.7, 121)
    s = np.array([ne_entropy(BASE.junction(eps_qb=float(e)), "eq") for e in eps])
    arg, top = float(eps[np.argmax(s)]), float(s.max())
    ok_arg = abs(arg - 0.1) <= 0.01 + 1e-12
    ok_top = 0.66 <= top <= math.log(2) + 1e-9
    ok_ends = s[0] < 0.05 and s[-1] < 0.05
    record(3, ok_arg and ok_top and ok_ends,
           f"equilibrium entropy curve, argmax {arg:.4f} (0.1 +- 0.01), max {top:.6f} (in [0.66, ln 2]), "
           f"ends {s[0]:.4f}, {s[-1]:.4f} (< 0.05)")


def test_criterion_04_resonance():
    j = BASE.junction(eps_qb=0.1)
    w = np.linspace(-0.3, 0.5, 200_001)
    sl = surface_sigma(w)
    tau_oracle = (2 * sl.imag) ** 2 / np.abs(w - 0.1 - 2 * sl) ** 2
    peak = float(transmission(w, j).max())
    ok = 1 - 1e-6 <= peak <= 1 + 1e-9 and abs(peak - tau_oracle.max()) < 1e-9
    record(4, ok, f"resonant transmission, max tau = {peak:.12f} (oracle {tau_oracle.max():.12f})")


def test_criterion_05_thermodynamic_identities():
    worst = dict(entropy=0.0, heat=0.0, sigma=0.0, exergy=0.0)
    for dmu, dt in GRID_5x5:
        j = BASE.junction(dmu, dt)
        tr, th = transport_record(j), thermo_record(j)
        bl, br = 1 / j.left.temperature, 1 / j.right.temperature
        jl, jr = tr.heat_current_left, tr.heat_current_right
        worst["entropy"] = max(worst["entropy"], abs(tr.entropy_production + bl * jl - br * jr))
        worst["heat"] = max(worst["heat"], abs(jl - jr + dmu * tr.charge_current))
        worst["sigma"] = min(worst["sigma"], tr.entropy_production)
        worst["exergy"] = min(worst["exergy"], th.exergy_beta)
    ok = (worst["entropy"] < 1e-10 and worst["heat"] < 1e-12
          and worst["sigma"] >= -1e-12 and worst["exergy"] >= -1e-10)
    record(5, ok, "identities on 5x5 grid, "
           f"entropy balance {worst['entropy']:.3g}, heat balance {worst['heat']:.3g}, "
           f"min sigma {worst['sigma']:.3g}, min exergy {worst['exergy']:.3g}")


def test_criterion_06_exergy_decomposition(oracle_for):
    worst = 0.0
    for dmu, dt in GRID_5x5:
        j = BASE.junction(dmu, dt)
        th = thermo_record(j)
        ref = j.eq_ref
        grand = (th.energy - ref.mu * th.particle_number) - (th.eq_energy - ref.mu * th.eq_particle_number)
        grand /= ref.temperature
        worst = max(worst, abs(th.exergy_beta - (grand - (th.entropy - th.eq_entropy))))
    j = BASE.junction(0.5, 0.2)
    o = oracle_for(j)
    rel = abs(thermo_record(j).exergy_beta / o.exergy_beta() - 1)
    record(6, worst < 1e-8 and rel < 1e-6,
           f"exergy decomposition, max residual {worst:.3g} (< 1e-8); oracle rel. diff {rel:.3g}")


def test_criterion_07_gradient_crossing():
    cfg = SweepConfig(eps_qb=0.4, dmu=Grid(0, 0.7, 15), dt=Grid(-0.05, 0.05, 3))
    rows = run_sweep(cfg)
    cold_c, flat, hot_c = (np.array([r.W_ext_beta for r in rows if np.isclose(r.dT, t)]) for t in (-0.05, 0.0, 0.05))
    dmu = np.array([r.dmu for r in rows if np.isclose(r.dT, 0.0)])
    monotone = bool(np.all(np.diff(flat) >= 0))
    d = hot_c - cold_c
    k = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    cross = float(dmu[k[0]] - d[k[0]] * (dmu[k[0] + 1] - dmu[k[0]]) / (d[k[0] + 1] - d[k[0]])) if k.size else math.nan
    cold, hot = (run_point(BASE.junction(0.6, t, 0.4)).W_ext_beta for t in (-0.05, 0.05))
    ok = monotone and k.size >= 1 and abs(cross - 0.3) <= 0.05 and cold > hot
    record(7, ok, f"gradient structure, monotone {monotone}, crossing at dmu = {cross:.4f} (0.3 +- 0.05), "
           f"at dmu = 0.6 cold {cold:.5f} > hot {hot:.5f}")


def test_criterion_08_exergy_optimum():
    levels = Grid(-0.5, 1.0, 31)
    x0, _ = optimize_exergy(SweepConfig(dmu=Grid.point(0.5), eps_qb_grid=levels), "eps_qb")
    shifts = [abs(optimize_exergy(SweepConfig(dmu=Grid.point(0.5), dt=Grid.point(t), eps_qb_grid=levels),
                                  "eps_qb")[0] - x0) for t in (-0.05, 0.05)]
    ok = 0.4 <= x0 <= 0.6 and max(shifts) < 0.1
    record(8, ok, f"exergy optimum, argmax eps_qb = {x0:.4f} (in [0.4, 0.6]), max shift {max(shifts):.4f} (< 0.1)")


def test_criterion_09_regime_sign_flip(oracle_for):
    above = BASE.junction(0.0, 0.1, 0.4)
    below = BASE.junction(0.0, 0.1, -0.2)
    ia, ib = transport_record(above).charge_current, transport_record(below).charge_current
    oa, ob = oracle_for(above).charge_current(), oracle_for(below).charge_current()
    ok = np.sign(ia) == -np.sign(ib) and min(abs(ia), abs(ib)) > 1e-8 and np.sign(oa) == np.sign(ia)
    ok = ok and np.sign(ob) == np.sign(ib)
    record(9, bool(ok), f"thermoelectric sign flip, I_Q(0.4) = {ia:.4g}, I_Q(-0.2) = {ib:.4g}")


def _gaps(nu):
    cfg = SweepConfig(nu_left=nu, nu_right=nu, mu_eq=0.0, eps_qb=0.3)
    w = s = 0.0
    for dmu in np.linspace(0, 0.5, 11):
        c = compare_approaches(cfg.junction(float(dmu), 0.0))
        w, s = max(w, abs(c.exergy_gap)), max(s, abs(c.entropy_gap))
    return w, s


def test_criterion_10_weak_coupling():
    g12, g06, g01 = _gaps(0.12), _gaps(0.06), _gaps(0.01)
    ok = all(g06[k] < g12[k] and g01[k] < 0.1 * g12[k] for k in (0, 1))
    record(10, ok, f"weak-coupling convergence, exergy gaps {g12[0]:.3g} > {g06[0]:.3g} > {g01[0]:.3g}, "
           f"entropy gaps {g12[1]:.3g} > {g06[1]:.3g} > {g01[1]:.3g}")


def test_criterion_11_oracle_equivalence(oracle_for):
    worst = 0.0
    for eps in (0.1, 0.4, -0.2):
        j = BASE.junction(0.4, 0.0, eps)
        row, o = run_point(j), oracle_for(j)
        for got, ref in ((row.I_Q, o.charge_current()), (row.J_E, o.energy_current()),
                         (row.W_ext_beta, o.exergy_beta())):
            worst = max(worst, abs(got - ref) / abs(ref))
    record(11, worst < 1e-6, f"oracle equivalence, max relative difference {worst:.3g} (< 1e-6)")


def test_criterion_12_wide_window_current(oracle_for):
    j = replace(BASE.junction(eps_qb=0.4), left=ReservoirState(0.9, 0.01), right=ReservoirState(0.1, 0.01))
    current = transport_record(j).charge_current
    gamma = float(-2 * surface_sigma(0.4).imag)
    oracle = oracle_for(j).charge_current()
    rel = abs(current / (gamma / 2) - 1)
    ok = rel < 0.05 and abs(current / oracle - 1) < 1e-6
    record(12, ok, f"wide-window current, I_Q = {current:.6f} vs Gamma/2 = {gamma / 2:.6f} ({rel:.2%}, < 5%); "
           f"oracle {oracle:.6f}")


def test_criterion_13_determinism(tmp_path):
    argv = [sys.executable, "-m", "qbattery", "sweep", "--dmu", "0,0.7,15", "--dt=-0.05,0.05,3",
            "--eps-qb", "-0.2,0.4,3"]
    runs = [subprocess.run(argv + extra, capture_output=True, check=True).stdout
            for extra in ([], [], ["--jobs", "2"])]
    ok = runs[0] == runs[1] == runs[2] and runs[0].count(b"\n") == 136
    record(13, ok, f"determinism, {len(runs)} runs byte-identical: {ok}")
