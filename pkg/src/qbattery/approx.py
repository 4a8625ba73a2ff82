"""Isolated-level (Gibbs-form) approximation of the battery density matrix.

The approximation keeps only the mean occupation ``d`` of the level and
treats it as a two-state system ``exp(-a n) / (1 + exp(-a))`` with
``a = ln(1/d - 1)``. Its entropy and exergy are Bernoulli entropies rather
than A-weighted averages. The two routes agree when the level is weakly
coupled and A_QB narrows to a delta peak.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr

from .device import Junction
from .errors import DomainError
from .leads import fermi
from .thermo import particle_number, thermo_record

REF_MODES = ("broadened", "isolated_level")


@dataclass(frozen=True)
class ApproxRecord:
    occupation: float
    a_param: float
    entropy: float
    exergy_beta: float
    ref_mode: str = "broadened"


@dataclass(frozen=True)
class Comparison:
    """Both routes at one junction; gaps are ``exact - approximate``."""

    exergy_beta: float
    rho_exergy_beta: float
    entropy: float
    rho_entropy: float

    @property
    def exergy_gap(self) -> float:
        return self.exergy_beta - self.rho_exergy_beta

    @property
    def entropy_gap(self) -> float:
        return self.entropy - self.rho_entropy


def occupation(j: Junction, settings=None) -> float:
    """``d_QB = int A f_NE dw``; the same integral as ``particle_number(j, "ne")``."""
    return particle_number(j, "ne", settings)


def a_parameter(d: float) -> float:
    if not 0.0 < d < 1.0:
        raise DomainError(f"occupation must lie in (0, 1) for a finite Gibbs parameter, got {d!r}")
    return float(np.log(1.0 / d - 1.0))


def rho_entropy(d: float) -> float:
    """Binary entropy ``-(1 - d) ln(1 - d) - d ln d`` with ``0 ln 0 = 0``."""
    if not 0.0 <= d <= 1.0:
        raise DomainError(f"occupation must lie in [0, 1], got {d!r}")
    return float(-(rel_entr(d, 1.0) + rel_entr(1.0 - d, 1.0)))


def reference_occupation(j: Junction, ref_mode: str = "broadened", settings=None) -> float:
    """Equilibrium occupation the approximate exergy is measured against.

    ``broadened`` integrates A against the equilibrium Fermi function;
    ``isolated_level`` takes the Fermi function at the bare level.
    """
    if ref_mode == "broadened":
        return particle_number(j, "eq", settings)
    if ref_mode == "isolated_level":
        return float(fermi(j.eps_qb, j.eq_ref))
    raise ValueError(f"ref_mode must be one of {REF_MODES}, got {ref_mode!r}")


def bernoulli_relative_entropy(d: float, n_ref: float) -> float:
    return float(rel_entr(d, n_ref) + rel_entr(1.0 - d, 1.0 - n_ref))


def rho_exergy_beta(d: float, j: Junction, settings=None, ref_mode: str = "broadened", n_ref=None) -> float:
    """``d ln(d / n_ref) + (1 - d) ln((1 - d) / (1 - n_ref))``."""
    if n_ref is None:
        n_ref = reference_occupation(j, ref_mode, settings)
    return bernoulli_relative_entropy(d, n_ref)


def approx_record(j: Junction, settings=None, ref_mode: str = "broadened", thermo=None) -> ApproxRecord:
    """Approximate observables; reuses a precomputed ThermoRecord if given."""
    if thermo is None:
        d = occupation(j, settings)
        n_ref = reference_occupation(j, ref_mode, settings)
    else:
        d = thermo.particle_number
        n_ref = thermo.eq_particle_number if ref_mode == "broadened" else reference_occupation(j, ref_mode)
    d = float(np.clip(d, 0.0, 1.0))
    a = a_parameter(d) if 0.0 < d < 1.0 else float(np.copysign(np.inf, 0.5 - d))
    return ApproxRecord(
        occupation=d,
        a_param=a,
        entropy=rho_entropy(d),
        exergy_beta=bernoulli_relative_entropy(d, n_ref),
        ref_mode=ref_mode,
    )


def compare_approaches(j: Junction, settings=None, ref_mode: str = "broadened") -> Comparison:
    rec = thermo_record(j, settings)
    approx = approx_record(j, settings, ref_mode, thermo=rec)
    return Comparison(
        exergy_beta=rec.exergy_beta,
        rho_exergy_beta=approx.exergy_beta,
        entropy=rec.entropy,
        rho_entropy=approx.entropy,
    )

