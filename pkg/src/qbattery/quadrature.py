"""Adaptive 1D quadrature over lead bands.

Panels are integrated with the 15-point Gauss-Kronrod rule and its
embedded 7-point Gauss rule; ``|K15 - G7|`` is the panel error. Every
integrand is evaluated on all active panels at once, so callers pass
functions that accept a 1D array of energies and return either an array
of the same length or a ``(k, n)`` stack of ``k`` components sharing one
mesh.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .device import Junction, band_union, green_from_offset, resonance
from .errors import NonConvergenceError

# Kronrod abscissae on [0, 1], descending; odd indices are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_wg8 = np.zeros(8)
_wg8[1::2] = _WG
GAUSS_WEIGHTS = np.concatenate([_wg8[:-1], _wg8[::-1]])
del _wg8


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be > 0")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be an integer >= 1")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class IntegralResult:
    """Integral value (float or array of components), error bound and bisection count."""

    value: float | np.ndarray
    error_estimate: float | np.ndarray
    subdivisions_used: int


def _panel_rules(func, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[None, :] + half[None, :] * NODES[:, None]
    raw = np.asarray(func(x.ravel()), dtype=float)
    y = raw.reshape((-1,) + x.shape)
    kron = half * np.einsum("i,kip->kp", KRONROD_WEIGHTS, y)
    gauss = half * np.einsum("i,kip->kp", GAUSS_WEIGHTS, y)
    return kron, np.abs(kron - gauss), raw.ndim == 1


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    support: tuple[float, float],
    breakpoints: Iterable[float] = (),
    settings: QuadratureSettings | None = None,
) -> IntegralResult:
    """Integrate ``func`` over ``support`` to ``max(abs_tol, rel_tol |I|)``.

    The interval is first cut at every breakpoint strictly inside it. Each
    round then bisects the worst panels, just enough of them that the
    remaining error would meet the tolerance. For stacked integrands every
    component must meet its own tolerance.

    Raises
    ------
    NonConvergenceError
        When ``settings.max_subdivisions`` bisections were spent without
        meeting the tolerance. The exception carries the best estimate.
    """
    settings = DEFAULT_SETTINGS if settings is None else settings
    a, b = float(support[0]), float(support[1])
    if not (np.isfinite(a) and np.isfinite(b)) or b < a:
        raise ValueError(f"support must be a finite interval, got {support!r}")
    inner = [float(p) for p in breakpoints if a < p < b]
    edges = np.unique(np.array([a, b] + inner))
    if b == a:
        probe = np.asarray(func(np.empty(0)), dtype=float)
        zero = 0.0 if probe.ndim == 1 else np.zeros(probe.shape[0])
        return IntegralResult(zero, zero, 0)

    lo, hi = edges[:-1], edges[1:]
    vals, errs, scalar = _panel_rules(func, lo, hi)
    splits = 0
    while True:
        total = vals.sum(axis=1)
        err = errs.sum(axis=1)
        tol = np.maximum(settings.abs_tol, settings.rel_tol * np.abs(total))
        if np.all(err <= tol):
            break
        budget = settings.max_subdivisions - splits
        if budget <= 0:
            raise NonConvergenceError(
                f"quadrature did not converge after {splits} subdivisions "
                f"(error {err.max():.3e} > tolerance {tol.min():.3e})",
                value=total[0] if scalar else total,
                error_estimate=err[0] if scalar else err,
                subdivisions_used=splits,
            )
        ratio = (errs / tol[:, None]).max(axis=0)
        order = np.argsort(-ratio, kind="stable")
        remaining = ratio.sum() - np.cumsum(ratio[order])
        done = np.nonzero(remaining <= 0.5)[0]
        n = (done[0] + 1) if done.size else order.size
        n = int(min(max(n, 1), budget))
        pick = np.sort(order[:n])
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne, _ = _panel_rules(func, new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[:, keep], nv], axis=1)
        errs = np.concatenate([errs[:, keep], ne], axis=1)
        pos = np.argsort(lo, kind="stable")
        lo, hi, vals, errs = lo[pos], hi[pos], vals[:, pos], errs[:, pos]
        splits += n

    if scalar:
        return IntegralResult(float(total[0]), float(err[0]), splits)
    return IntegralResult(total, err, splits)


def band_support(j: Junction, mode: str = "union"):
    """Energy window of the lead bands: their hull (``union``) or overlap.

    Returns ``(lo, hi)`` or ``None`` when the overlap is empty.
    """
    (a0, a1), (b0, b1) = j.left_lead.band, j.right_lead.band
    if mode == "union":
        return band_union(j)
    if mode == "intersection":
        lo, hi = max(a0, b0), min(a1, b1)
        return (lo, hi) if lo < hi else None
    raise ValueError(f"mode must be 'union' or 'intersection', got {mode!r}")


LOW_T_REFINE = 0.02


def _structure_points(j):
    pts = [j.eps_qb, j.left.mu, j.right.mu, j.eq_ref.mu]
    pts += list(j.left_lead.band) + list(j.right_lead.band)
    for res in (j.left, j.right, j.eq_ref):
        if res.temperature < LOW_T_REFINE:
            pts += [res.mu - 8 * res.temperature, res.mu + 8 * res.temperature]
    return pts


def _ladder(j):
    lo, hi = band_union(j)
    peak = resonance(j)
    if peak is None:
        return None, []
    r, gamma = peak
    steps = [0.0]
    step = gamma
    while step < hi - lo:
        steps += [-step, step]
        step *= 10.0
    return r, steps


def junction_breakpoints(j: Junction) -> list[float]:
    """Energies where the physical integrands have narrow structure.

    The level, all chemical potentials and the band edges are always
    included. Cold reservoirs (T < 0.02) add ``mu +- 8T``. The resonance
    gets a geometric ladder ``r +- gamma 10^k`` so that a peak much narrower
    than its panel is never stepped over by the Kronrod nodes.
    """
    r, steps = _ladder(j)
    pts = _structure_points(j)
    if r is not None:
        pts += [r + s for s in steps]
    return sorted(set(pts))


def physical_integral(
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    j: Junction,
    mode: str = "union",
    settings: QuadratureSettings | None = None,
) -> IntegralResult:
    """Integrate ``integrand(w, G^r(w))`` over the band support of ``j``.

    The integration variable is the offset from the resonance (or from the
    bare level when there is none), which keeps peaks of width down to
    ~1e-12 resolvable; see :func:`~qbattery.device.green_from_offset`.
    An empty support integrates to zero.
    """
    support = band_support(j, mode)
    r, steps = _ladder(j)
    origin = j.eps_qb if r is None else r
    func = lambda u: integrand(*green_from_offset(u, j, origin))  # noqa: E731
    if support is None:
        return integrate(func, (0.0, 0.0), (), settings)
    pts = [p - origin for p in _structure_points(j)] + steps
    return integrate(func, (support[0] - origin, support[1] - origin), pts, settings)


def spectral_weight(j: Junction, settings: QuadratureSettings | None = None) -> IntegralResult:
    """Integral of A_QB over the union of the lead bands (1 without bound states)."""
    return physical_integral(lambda w, g: -g.imag / np.pi, j, "union", settings)
