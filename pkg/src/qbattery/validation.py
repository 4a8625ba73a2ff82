"""Self-validation suite: invariants, forced values, oracles and figure-level structure.

Every check records what it measured next to the tolerance it was held to.
Checks that cannot run for a configuration (a decoupled level has no
transport window) are reported as skipped with the reason.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .approx import approx_record
from .device import DeviceSpec, Junction, check_bound_states, transmission
from .errors import BoundStateError, DegeneratePoleError, NonConvergenceError
from .leads import LeadSpec, ReservoirState, lead_broadening
from .output import write_csv
from .quadrature import band_support, spectral_weight
from .scenarios import Grid, SweepConfig, optimize_exergy, run_sweep
from .thermo import (
    exergy_beta, exergy_decomposition, exergy_integrand, mean_energy, ne_entropy,
    particle_number, thermo_record,
)
from .transport import entropy_identity, transport_record

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
ORACLE_POINTS = 1_000_000


@dataclass
class Check:
    name: str
    status: str
    measured: str
    tolerance: str
    detail: str = ""

    def line(self) -> str:
        text = f"{self.status} {self.name}: measured {self.measured}; required {self.tolerance}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def lines(self) -> list[str]:
        n_fail = len(self.failures)
        n_skip = sum(c.status == SKIP for c in self.checks)
        summary = (
            f"{'PASS' if self.passed else 'FAIL'}: {len(self.checks) - n_fail - n_skip} passed, "
            f"{n_fail} failed, {n_skip} skipped in {self.elapsed:.1f}s"
        )
        return [c.line() for c in self.checks] + [summary]


def _check(name, ok, measured, tolerance, detail=""):
    return Check(name, PASS if ok else FAIL, measured, tolerance, detail)


def _g(x):
    return f"{x:.6g}"


def _base(config):
    s = config.sweep
    return SweepConfig(
        eps_alpha=s.eps_alpha, h_alpha=s.h_alpha, nu_left=s.nu_left, nu_right=s.nu_right,
        mu_eq=s.mu_eq, t_eq=s.t_eq, eps_qb=s.eps_qb, drive_side=s.drive_side,
    )


def trapezoid_oracle(integrand, j: Junction, mode: str = "union", points: int = ORACLE_POINTS) -> float:
    """Composite trapezoid on a uniform grid over the band support.

    Evaluated in absolute energy with the plain Green function, so it shares
    none of the adaptive integrator's machinery.
    """
    support = band_support(j, mode)
    if support is None:
        return 0.0
    w = np.linspace(support[0], support[1], points)
    return float(np.trapezoid(integrand(w), w)) if hasattr(np, "trapezoid") else float(np.trapz(integrand(w), w))


def oracle_charge_current(j: Junction, points: int = ORACLE_POINTS) -> float:
    from .leads import fermi

    def f(w):
        return transmission(w, j) * (fermi(w, j.left) - fermi(w, j.right))

    return trapezoid_oracle(f, j, "intersection", points) / (2 * np.pi)


def oracle_energy_current(j: Junction, points: int = ORACLE_POINTS) -> float:
    from .leads import fermi

    def f(w):
        return w * transmission(w, j) * (fermi(w, j.left) - fermi(w, j.right))

    return trapezoid_oracle(f, j, "intersection", points) / (2 * np.pi)


def oracle_exergy_beta(j: Junction, points: int = ORACLE_POINTS) -> float:
    return trapezoid_oracle(lambda w: exergy_integrand(w, j), j, "union", points)


def _identity_grid():
    return [(float(m), float(t)) for m in np.linspace(-0.5, 0.5, 5) for t in np.linspace(-0.05, 0.2, 5)]


def check_equilibrium_nullity(base, settings):
    j = base.junction(0.0, 0.0)
    tr = transport_record(j, settings)
    w = exergy_beta(j, settings)
    vals = [tr.charge_current, tr.energy_current, tr.heat_current_left,
            tr.heat_current_right, tr.entropy_production, w]
    worst = max(abs(v) for v in vals)
    return [_check("equilibrium_nullity", worst < 1e-10, _g(worst), "max |current, sigma, exergy| < 1e-10")]


def check_sum_rule(base, settings):
    worst, where, bound = 0.0, None, 0.0
    for eps in (-0.5, -0.2, 0.1, 0.4, 0.7):
        res = spectral_weight(base.junction(eps_qb=eps), settings)
        dev = abs(res.value - 1.0)
        bound = max(bound, res.error_estimate)
        if dev >= worst:
            worst, where = dev, eps
    return [_check("spectral_sum_rule", worst <= 1e-6 and bound <= 1e-6,
                   f"{_g(worst)} (error estimate {_g(bound)})", "|int A - 1| <= 1e-6, certified",
                   f"worst at eps_qb={where}")]


def check_equilibrium_entropy(base, settings):
    eps = np.linspace(-0.5, 0.7, 121)
    s = np.array([ne_entropy(base.junction(eps_qb=float(e)), "eq", settings) for e in eps])
    i = int(np.argmax(s))
    ends = max(s[0], s[-1])
    return [
        _check("equilibrium_entropy_argmax", abs(eps[i] - 0.1) <= 0.01 + 1e-12, _g(eps[i]), "0.1 +- 0.01"),
        _check("equilibrium_entropy_max", 0.66 <= s[i] <= math.log(2) + 1e-9, _g(s[i]), "[0.66, ln 2]"),
        _check("equilibrium_entropy_ends", ends < 0.05, f"{_g(s[0])}, {_g(s[-1])}", "< 0.05 at both ends"),
    ]


def check_resonance(base, settings):
    if base.nu_left != base.nu_right:
        return [Check("resonant_transmission", SKIP, "-", "max tau in [1-1e-6, 1+1e-9]",
                      "leads are not identical")]
    from scipy.optimize import minimize_scalar

    j = base.junction(eps_qb=0.1)
    lo, hi = band_support(j, "intersection")
    w = np.linspace(lo, hi, 200001)[1:-1]
    k = int(np.argmax(transmission(w, j)))
    a, b = w[max(k - 1, 0)], w[min(k + 1, w.size - 1)]
    res = minimize_scalar(lambda x: -float(transmission(x, j)), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-14})
    tmax = float(max(float(transmission(w[k], j)), -res.fun))
    return [_check("resonant_transmission", 1 - 1e-6 <= tmax <= 1 + 1e-9, repr(tmax), "[1-1e-6, 1+1e-9]")]


def check_identities(base, settings):
    worst_s, worst_h, min_sigma, min_w = 0.0, 0.0, math.inf, math.inf
    for dmu, dt in _identity_grid():
        j = base.junction(dmu, dt)
        tr = transport_record(j, settings)
        worst_s = max(worst_s, abs(tr.entropy_production - entropy_identity(j, tr)))
        dmu_lr = j.left.mu - j.right.mu
        worst_h = max(worst_h, abs(tr.heat_current_left - tr.heat_current_right + dmu_lr * tr.charge_current))
        min_sigma = min(min_sigma, tr.entropy_production)
        min_w = min(min_w, exergy_beta(j, settings))
    return [
        _check("entropy_production_identity", worst_s < 1e-10, _g(worst_s), "< 1e-10"),
        _check("heat_current_balance", worst_h < 1e-12, _g(worst_h), "< 1e-12"),
        _check("entropy_production_nonnegative", min_sigma >= -1e-12, _g(min_sigma), ">= -1e-12"),
        _check("exergy_nonnegative", min_w >= -1e-10, _g(min_w), ">= -1e-10"),
    ]


def check_exergy_decomposition(base, settings):
    """Each term gets its own adaptive integral, so quadrature error shows up here.

    The propagated error estimate of the seven integrals must also fit the
    tolerance; an identity that holds by luck on an unrefined mesh fails.
    """
    worst = bound = 0.0
    for dmu, dt in _identity_grid():
        j = base.junction(dmu, dt)
        rec = thermo_record(j, settings)
        ref = j.eq_ref
        bound = max(bound, rec.quad_error * (ref.beta * (2 + 2 * abs(ref.mu)) + 3))
        rec = replace(
            rec,
            particle_number=particle_number(j, "ne", settings),
            energy=mean_energy(j, "ne", settings),
            entropy=ne_entropy(j, "ne", settings),
            exergy_beta=exergy_beta(j, settings),
            eq_particle_number=particle_number(j, "eq", settings),
            eq_energy=mean_energy(j, "eq", settings),
            eq_entropy=ne_entropy(j, "eq", settings),
        )
        worst = max(worst, abs(rec.exergy_beta - exergy_decomposition(rec, j.eq_ref)))
    return [_check("exergy_decomposition", worst < 1e-8 and bound < 1e-8,
                   f"{_g(worst)} (error estimate {_g(bound)})", "< 1e-8, certified")]


def check_gradient_crossing(base, settings):
    dmus = np.linspace(0.0, 0.7, 15)
    cfg = replace(base, eps_qb=0.4)
    curve = {dt: np.array([exergy_beta(cfg.junction(float(m), dt), settings) for m in dmus])
             for dt in (-0.05, 0.0, 0.05)}
    steps = np.diff(curve[0.0])
    mono = float(steps.min())
    diff = curve[0.05] - curve[-0.05]
    crossings = [
        float(dmus[k] - diff[k] * (dmus[k + 1] - dmus[k]) / (diff[k + 1] - diff[k]))
        for k in range(dmus.size - 1)
        if diff[k] != 0 and diff[k] * diff[k + 1] < 0
    ]
    cross_ok = len(crossings) == 1 and abs(crossings[0] - 0.3) <= 0.05 + 1e-12
    j_cold, j_hot = cfg.junction(0.6, -0.05), cfg.junction(0.6, 0.05)
    w_cold, w_hot = exergy_beta(j_cold, settings), exergy_beta(j_hot, settings)
    return [
        _check("exergy_monotone_in_bias", mono >= 0.0, _g(mono), "min step >= 0 on dmu in [0, 0.7]"),
        _check("gradient_curves_cross", cross_ok, ", ".join(_g(c) for c in crossings) or "none",
               "single crossing at 0.3 +- 0.05"),
        _check("cold_side_wins_at_high_bias", w_cold > w_hot, f"{_g(w_cold)} vs {_g(w_hot)}",
               "exergy(dT=-0.05) > exergy(dT=+0.05) at dmu=0.6"),
    ]


def check_exergy_optimum(base, settings):
    eps_grid = Grid(-0.5, 1.0, 31)
    x0, _ = optimize_exergy(replace(base, dmu=Grid.point(0.5), eps_qb_grid=eps_grid), "eps_qb", settings)
    shifts = []
    for dt in (-0.05, 0.05):
        x, _ = optimize_exergy(
            replace(base, dmu=Grid.point(0.5), dt=Grid.point(dt), eps_qb_grid=eps_grid), "eps_qb", settings
        )
        shifts.append(abs(x - x0))
    return [
        _check("exergy_argmax_level", 0.4 <= x0 <= 0.6, _g(x0), "[0.4, 0.6]"),
        _check("exergy_argmax_gradient_shift", max(shifts) < 0.1, _g(max(shifts)), "< 0.1"),
    ]


def check_regime_signs(base, settings):
    i_empty = transport_record(base.junction(0.0, 0.1, 0.4), settings).charge_current
    i_full = transport_record(base.junction(0.0, 0.1, -0.2), settings).charge_current
    ok = abs(i_empty) > 1e-8 and abs(i_full) > 1e-8 and np.sign(i_empty) == -np.sign(i_full)
    return [_check("thermoelectric_sign_flip", ok, f"{_g(i_empty)} (eps=0.4), {_g(i_full)} (eps=-0.2)",
                   "opposite signs, |I_Q| > 1e-8")]


def _gaps(base, nu, settings, ref_mode):
    cfg = replace(base, nu_left=nu, nu_right=nu, mu_eq=0.0, eps_qb=0.3)
    w_gap = s_gap = 0.0
    for dmu in np.linspace(0.0, 0.5, 11):
        j = cfg.junction(float(dmu), 0.0)
        th = thermo_record(j, settings)
        ap = approx_record(j, settings, ref_mode, thermo=th)
        w_gap = max(w_gap, abs(ap.exergy_beta - th.exergy_beta))
        s_gap = max(s_gap, abs(ap.entropy - th.entropy))
    return w_gap, s_gap


def check_weak_coupling(base, settings, ref_mode):
    g = {nu: _gaps(base, nu, settings, ref_mode) for nu in (0.01, 0.06, 0.12)}
    out = []
    for k, label in ((0, "exergy"), (1, "entropy")):
        a, b, c = g[0.01][k], g[0.06][k], g[0.12][k]
        out.append(_check(
            f"weak_coupling_{label}_gap", b < c and a < 0.1 * c,
            f"gap(0.01)={_g(a)}, gap(0.06)={_g(b)}, gap(0.12)={_g(c)}",
            "gap(0.06) < gap(0.12) and gap(0.01) < 0.1 gap(0.12)",
        ))
    return out


def check_oracle(base, settings):
    worst, where, bound = 0.0, "", 0.0
    for eps in (0.1, 0.4, -0.2):
        j = base.junction(0.4, 0.0, eps)
        tr = transport_record(j, settings)
        th = thermo_record(j, settings)
        pairs = (
            ("I_Q", tr.charge_current, tr.quad_error, oracle_charge_current(j)),
            ("J_E", tr.energy_current, tr.quad_error, oracle_energy_current(j)),
            ("W_ext_beta", th.exergy_beta, th.quad_error, oracle_exergy_beta(j)),
        )
        for name, adaptive, err, oracle in pairs:
            scale = max(abs(oracle), 1e-300)
            rel = abs(adaptive - oracle) / scale
            bound = max(bound, err / scale)
            if rel >= worst:
                worst, where = rel, f"{name} at eps_qb={eps}"
    return [_check("trapezoid_oracle", worst < 1e-6 and bound < 1e-6,
                   f"{_g(worst)} (relative error estimate {_g(bound)})", "relative < 1e-6, certified",
                   f"worst {where}")]


def check_wide_window(base, settings):
    left = LeadSpec(base.eps_alpha, base.h_alpha, base.nu_left)
    right = LeadSpec(base.eps_alpha, base.h_alpha, base.nu_right)
    j = Junction(left, ReservoirState(0.9, 0.01), right, ReservoirState(0.1, 0.01), DeviceSpec(0.4))
    iq = transport_record(j, settings).charge_current
    gl, gr = float(lead_broadening(0.4, left)), float(lead_broadening(0.4, right))
    estimate = gl * gr / (gl + gr)
    rel = abs(iq - estimate) / estimate
    return [_check("wide_window_current", rel <= 0.05, f"{_g(iq)} vs Lorentzian {_g(estimate)} ({rel:.2%})",
                   "within 5%")]


def check_determinism(base, settings, ref_mode):
    cfg = replace(base, eps_qb=0.4, dmu=Grid(0.0, 0.7, 15), dt=Grid(-0.05, 0.05, 3))
    a = write_csv(run_sweep(cfg, settings, ref_mode))
    b = write_csv(run_sweep(cfg, settings, ref_mode))
    c = write_csv(run_sweep(cfg, settings, ref_mode, n_jobs=2))
    same = a == b == c
    return [_check("sweep_determinism", same, "identical" if same else "differs",
                   "byte-identical CSV: two serial runs and a 2-process run")]


SUITE = (
    ("equilibrium_nullity", check_equilibrium_nullity),
    ("spectral_sum_rule", check_sum_rule),
    ("equilibrium_entropy", check_equilibrium_entropy),
    ("resonant_transmission", check_resonance),
    ("thermodynamic_identities", check_identities),
    ("exergy_decomposition", check_exergy_decomposition),
    ("gradient_crossing", check_gradient_crossing),
    ("exergy_optimum", check_exergy_optimum),
    ("thermoelectric_sign_flip", check_regime_signs),
    ("weak_coupling", check_weak_coupling),
    ("trapezoid_oracle", check_oracle),
    ("wide_window_current", check_wide_window),
    ("sweep_determinism", check_determinism),
)
NEEDS_REF_MODE = {"weak_coupling", "sweep_determinism"}


def _decoupled_report(base, report):
    poles = (base.eps_qb,)
    try:
        check_bound_states(base.junction(), None)
    except BoundStateError as exc:
        poles = exc.poles or poles
        reason = str(exc)
    else:
        reason = "level is decoupled"
    report.checks.append(Check(
        "bound_states", FAIL, f"pole(s) at w = {', '.join(_g(p) for p in poles)}",
        "level coupled to at least one lead", reason,
    ))
    for name, _ in SUITE:
        report.checks.append(Check(name, SKIP, "-", "-", "no transport window: the level is decoupled (nu = 0)"))


def validate(config, only=None) -> Report:
    """Run the acceptance suite with the leads, equilibrium point and numerics of ``config``.

    ``only`` optionally restricts the run to named groups from :data:`SUITE`.
    """
    t0 = time.perf_counter()
    base = _base(config)
    settings = config.quadrature
    report = Report()
    if base.nu_left == 0 and base.nu_right == 0:
        _decoupled_report(base, report)
        report.elapsed = time.perf_counter() - t0
        return report
    try:
        check_bound_states(base.junction(), settings)
    except BoundStateError as exc:
        report.checks.append(Check("bound_states", FAIL, _g(exc.deficit), "sum-rule deficit <= 1e-4", str(exc)))
    else:
        report.checks.append(Check("bound_states", PASS, "none", "no out-of-band poles"))
    for name, fn in SUITE:
        if only is not None and name not in only:
            continue
        try:
            args = (base, settings, config.ref_mode) if name in NEEDS_REF_MODE else (base, settings)
            report.checks.extend(fn(*args))
        except (NonConvergenceError, DegeneratePoleError, BoundStateError) as exc:
            report.checks.append(Check(name, FAIL, "error", "-", f"{type(exc).__name__}: {exc}"))
    report.elapsed = time.perf_counter() - t0
    return report
