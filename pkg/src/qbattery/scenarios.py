"""Regime labels, (dmu, dT, eps_qb) sweeps and exergy maximisation."""
from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .approx import approx_record
from .device import Junction, check_bound_states
from .leads import LeadSpec
from .quadrature import QuadratureSettings
from .thermo import exergy_beta, particle_number, thermo_record
from .transport import transport_record

AXES = ("dmu", "dt", "eps_qb")

EMPTY_THRESHOLD = 0.1
FULL_THRESHOLD = 0.9


class Regime(str, enum.Enum):
    RESONANT = "resonant"
    OFF_RESONANT_EMPTY = "off_resonant_empty"
    OFF_RESONANT_FULL = "off_resonant_full"

    def __str__(self):
        return self.value


def regime_from_occupation(n_eq: float) -> Regime:
    if n_eq <= EMPTY_THRESHOLD:
        return Regime.OFF_RESONANT_EMPTY
    if n_eq >= FULL_THRESHOLD:
        return Regime.OFF_RESONANT_FULL
    return Regime.RESONANT


def classify_regime(j: Junction, settings=None) -> Regime:
    """Label the level by its equilibrium filling: <=0.1 empty, >=0.9 full."""
    return regime_from_occupation(particle_number(j, "eq", settings))


@dataclass(frozen=True)
class Grid:
    """``steps`` evenly spaced values from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    steps: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("grid bounds must be finite")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"grid steps must be an integer >= 1, got {self.steps!r}")

    @classmethod
    def point(cls, value: float) -> "Grid":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, int(self.steps))


@dataclass(frozen=True)
class SweepConfig:
    """Base junction plus up to three swept axes.

    Leads are identical except for their couplings. Axes left as ``None``
    stay at zero bias / zero gradient / the base ``eps_qb``.
    """

    eps_alpha: float = 0.0
    h_alpha: float = 1.0
    nu_left: float = 0.12
    nu_right: float = 0.12
    mu_eq: float = 0.1
    t_eq: float = 0.1
    eps_qb: float = 0.1
    dmu: Grid | None = None
    dt: Grid | None = None
    eps_qb_grid: Grid | None = None
    drive_side: str = "left"

    def __post_init__(self):
        LeadSpec(self.eps_alpha, self.h_alpha, self.nu_left)
        LeadSpec(self.eps_alpha, self.h_alpha, self.nu_right)
        if not (math.isfinite(self.t_eq) and self.t_eq > 0):
            raise ValueError(f"t_eq must be > 0, got {self.t_eq!r}")
        if not (math.isfinite(self.mu_eq) and math.isfinite(self.eps_qb)):
            raise ValueError("mu_eq and eps_qb must be finite")
        if self.drive_side not in ("left", "symmetric"):
            raise ValueError(f"drive_side must be 'left' or 'symmetric', got {self.drive_side!r}")

    def grid(self, axis: str) -> Grid:
        if axis == "dmu":
            return self.dmu or Grid.point(0.0)
        if axis == "dt":
            return self.dt or Grid.point(0.0)
        if axis == "eps_qb":
            return self.eps_qb_grid or Grid.point(self.eps_qb)
        raise ValueError(f"unknown axis {axis!r}; expected one of {AXES}")

    def junction(self, dmu: float = 0.0, dt: float = 0.0, eps_qb: float | None = None) -> Junction:
        return Junction.driven(
            self.eps_qb if eps_qb is None else eps_qb,
            dmu,
            dt,
            lead=LeadSpec(self.eps_alpha, self.h_alpha, self.nu_left),
            right_lead=LeadSpec(self.eps_alpha, self.h_alpha, self.nu_right),
            mu_eq=self.mu_eq,
            t_eq=self.t_eq,
            drive_side=self.drive_side,
        )

    def points(self) -> list[tuple[float, float, float]]:
        """Grid points in lexicographic (dmu, dt, eps_qb) order."""
        grids = [self.grid(a).values() for a in AXES]
        return [tuple(float(v) for v in p) for p in itertools.product(*grids)]


@dataclass(frozen=True)
class SweepRow:
    eps_qb: float
    dmu: float
    dT: float
    mu_L: float
    mu_R: float
    T_L: float
    T_R: float
    I_Q: float
    J_E: float
    J_H_L: float
    J_H_R: float
    sigma: float
    N_ne: float
    E_ne: float
    S_ne: float
    W_ext_beta: float
    N_eq: float
    E_eq: float
    S_eq: float
    d_qb: float
    a_param: float
    S_rho: float
    W_rho_beta: float
    regime: str
    quad_err: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def run_point(j: Junction, settings=None, ref_mode: str = "broadened", check: bool = True) -> SweepRow:
    """Every transport, thermodynamic and approximate observable at one junction."""
    if check:
        check_bound_states(j, settings)
    tr = transport_record(j, settings)
    th = thermo_record(j, settings)
    ap = approx_record(j, settings, ref_mode, thermo=th)
    return SweepRow(
        eps_qb=j.eps_qb,
        dmu=j.left.mu - j.right.mu,
        dT=j.left.temperature - j.right.temperature,
        mu_L=j.left.mu,
        mu_R=j.right.mu,
        T_L=j.left.temperature,
        T_R=j.right.temperature,
        I_Q=tr.charge_current,
        J_E=tr.energy_current,
        J_H_L=tr.heat_current_left,
        J_H_R=tr.heat_current_right,
        sigma=tr.entropy_production,
        N_ne=th.particle_number,
        E_ne=th.energy,
        S_ne=th.entropy,
        W_ext_beta=th.exergy_beta,
        N_eq=th.eq_particle_number,
        E_eq=th.eq_energy,
        S_eq=th.eq_entropy,
        d_qb=ap.occupation,
        a_param=ap.a_param,
        S_rho=ap.entropy,
        W_rho_beta=ap.exergy_beta,
        regime=regime_from_occupation(th.eq_particle_number).value,
        quad_err=max(tr.quad_error, th.quad_error),
    )


def _row_task(args):
    j, settings, ref_mode = args
    return run_point(j, settings, ref_mode, check=False)


def run_sweep(
    cfg: SweepConfig,
    settings: QuadratureSettings | None = None,
    ref_mode: str = "broadened",
    n_jobs: int = 1,
) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in lexicographic axis order.

    The spectral sum rule depends only on the level and the leads, so the
    bound-state check runs once per distinct ``eps_qb``. With ``n_jobs > 1``
    points are farmed out to worker processes; results are identical to a
    serial run.
    """
    for eps in cfg.grid("eps_qb").values():
        check_bound_states(cfg.junction(eps_qb=float(eps)), settings)
    tasks = [(cfg.junction(dmu, dt, eps), settings, ref_mode) for dmu, dt, eps in cfg.points()]
    if n_jobs is None or n_jobs <= 1 or len(tasks) < 2:
        return [_row_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * n_jobs))
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_row_task, tasks, chunksize=chunk))


INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a: float, b: float, tol: float = 1e-7, max_iter: int = 200):
    """Maximise a unimodal ``f`` on [a, b]; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_exergy(
    cfg: SweepConfig,
    free_axis: str,
    settings: QuadratureSettings | None = None,
    tol: float = 1e-7,
) -> tuple[float, float]:
    """Location and value of the largest exergy along ``free_axis``.

    Scans the axis grid, then refines by golden section between the grid
    neighbours of the best point. The other axes must be single-valued.
    Equal grid values resolve to the smaller axis value, and a refinement
    that does not beat the grid maximum is discarded.
    """
    if free_axis not in AXES:
        raise ValueError(f"unknown axis {free_axis!r}; expected one of {AXES}")
    fixed = {a: cfg.grid(a) for a in AXES if a != free_axis}
    for name, g in fixed.items():
        if g.steps != 1:
            raise ValueError(f"axis {name!r} must be single-valued when optimising over {free_axis!r}")
    base = {a: float(g.start) for a, g in fixed.items()}

    def objective(x):
        kw = dict(base)
        kw[free_axis] = float(x)
        return exergy_beta(cfg.junction(kw["dmu"], kw["dt"], kw["eps_qb"]), settings)

    xs = np.sort(cfg.grid(free_axis).values())
    ys = np.array([objective(x) for x in xs])
    i = int(np.argmax(ys))
    best_x, best_y = float(xs[i]), float(ys[i])
    if xs.size < 2:
        return best_x, best_y
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
    x, y = golden_section_max(objective, lo, hi, tol=tol)
    if y > best_y:
        return float(x), float(y)
    return best_x, best_y
