"""Battery-level Green functions, spectral function and transmission."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import BoundStateError, DegeneratePoleError
from .leads import LeadSpec, ReservoirState, lead_broadening, lead_self_energy


@dataclass(frozen=True)
class DeviceSpec:
    level: float = 0.1

    def __post_init__(self):
        if not np.isfinite(self.level):
            raise ValueError(f"level must be finite, got {self.level!r}")


@dataclass(frozen=True)
class Junction:
    """Left lead, battery level and right lead with their boundary conditions.

    ``eq_ref`` is the equilibrium state (mu, T) that exergy and the
    equilibrium reference quantities are measured against. When omitted it
    defaults to the right reservoir, which stays undriven in the usual
    charging protocol.
    """

    left_lead: LeadSpec
    left: ReservoirState
    right_lead: LeadSpec
    right: ReservoirState
    device: DeviceSpec
    eq_ref: ReservoirState | None = None

    def __post_init__(self):
        if self.eq_ref is None:
            object.__setattr__(self, "eq_ref", self.right)

    @property
    def eps_qb(self) -> float:
        return self.device.level

    @classmethod
    def driven(
        cls,
        eps_qb: float,
        dmu: float = 0.0,
        dT: float = 0.0,
        *,
        lead: LeadSpec | None = None,
        right_lead: LeadSpec | None = None,
        mu_eq: float = 0.1,
        t_eq: float = 0.1,
        drive_side: str = "left",
    ) -> "Junction":
        """Build a junction biased by ``dmu`` and heated by ``dT`` around (mu_eq, T_eq).

        ``drive_side="left"`` shifts only the left reservoir; ``"symmetric"``
        splits the offsets evenly between both sides.
        """
        lead = LeadSpec() if lead is None else lead
        right_lead = lead if right_lead is None else right_lead
        if drive_side == "left":
            left = ReservoirState(mu_eq + dmu, t_eq + dT)
            right = ReservoirState(mu_eq, t_eq)
        elif drive_side == "symmetric":
            left = ReservoirState(mu_eq + 0.5 * dmu, t_eq + 0.5 * dT)
            right = ReservoirState(mu_eq - 0.5 * dmu, t_eq - 0.5 * dT)
        else:
            raise ValueError(f"drive_side must be 'left' or 'symmetric', got {drive_side!r}")
        return cls(lead, left, right_lead, right, DeviceSpec(eps_qb), ReservoirState(mu_eq, t_eq))

    def swapped(self) -> "Junction":
        """Mirror image: left and right exchanged, same equilibrium reference."""
        return replace(
            self,
            left_lead=self.right_lead,
            left=self.right,
            right_lead=self.left_lead,
            right=self.left,
        )


def total_self_energy(omega, j: Junction):
    return lead_self_energy(omega, j.left_lead) + lead_self_energy(omega, j.right_lead)


def retarded_green(omega, j: Junction):
    """``G^r(w) = 1 / (w - eps_qb - Sigma_L(w) - Sigma_R(w))``."""
    denom = np.asarray(omega, dtype=float) - j.eps_qb - total_self_energy(omega, j)
    if np.any(denom == 0):
        raise DegeneratePoleError(
            f"Green function pole hit exactly at w={j.eps_qb!r} with zero broadening"
        )
    return 1.0 / denom


def green_from_offset(offset, j: Junction, origin: float):
    """``(w, G^r(w))`` at ``w = origin + offset``.

    The pole term is formed as ``offset + (origin - eps_qb) - Sigma(w)`` so that
    the distance to a resonance at ``origin`` keeps full relative precision
    even when the peak is far narrower than the spacing of floats near
    ``origin``. Only the slowly varying parts see the rounded ``w``.
    """
    offset = np.asarray(offset, dtype=float)
    omega = origin + offset
    denom = offset + (origin - j.eps_qb) - total_self_energy(omega, j)
    if np.any(denom == 0):
        raise DegeneratePoleError(
            f"Green function pole hit exactly at w={j.eps_qb!r} with zero broadening"
        )
    return omega, 1.0 / denom


def advanced_green(omega, j: Junction):
    return np.conj(retarded_green(omega, j))


def spectral_function(omega, j: Junction):
    """``A(w) = -Im G^r(w) / pi``."""
    return -np.imag(retarded_green(omega, j)) / np.pi


def transmission(omega, j: Junction):
    """Landauer transmission ``Gamma_L Gamma_R |G^r|^2``, in [0, 1]."""
    sl = lead_self_energy(omega, j.left_lead)
    sr = lead_self_energy(omega, j.right_lead)
    denom = np.asarray(omega, dtype=float) - j.eps_qb - sl - sr
    if np.any(denom == 0):
        raise DegeneratePoleError(
            f"Green function pole hit exactly at w={j.eps_qb!r} with zero broadening"
        )
    # Gamma_L Gamma_R / |denominator|^2 keeps the symmetric resonance at exactly 1
    return (2 * sl.imag) * (2 * sr.imag) / (denom.real**2 + denom.imag**2)


def band_union(j: Junction) -> tuple[float, float]:
    (a0, a1), (b0, b1) = j.left_lead.band, j.right_lead.band
    return (min(a0, b0), max(a1, b1))


def _pole_function(omega, j):
    return omega - j.eps_qb - np.real(total_self_energy(omega, j))


def resonance(j: Junction):
    """In-band solution of ``w - eps_qb - Re Sigma_tot(w) = 0`` and its half-width.

    Returns ``(position, half_width)`` or ``None`` when the root falls where
    no lead has states.
    """
    lo, hi = band_union(j)
    f_lo, f_hi = _pole_function(lo, j), _pole_function(hi, j)
    if f_lo == 0 or f_hi == 0 or np.sign(f_lo) == np.sign(f_hi):
        return None
    r = brentq(_pole_function, lo, hi, args=(j,), xtol=1e-15, rtol=4 * np.finfo(float).eps)
    gamma = lead_broadening(r, j.left_lead) + lead_broadening(r, j.right_lead)
    if gamma <= 0:
        return None
    return float(r), 0.5 * float(gamma)


def bound_state_poles(j: Junction) -> list[float]:
    """Real poles of G^r located where the total broadening vanishes.

    These carry spectral weight that the band integrals cannot see.
    """
    lo, hi = band_union(j)
    scale = max(j.left_lead.hopping, j.right_lead.hopping)
    reach = 4.0 * scale + abs(j.eps_qb) + (hi - lo) + 10.0 * (
        j.left_lead.coupling**2 / j.left_lead.hopping + j.right_lead.coupling**2 / j.right_lead.hopping
    )
    grid = np.linspace(lo - reach, hi + reach, 20001)
    grid = np.union1d(grid, [j.eps_qb])
    gamma = lead_broadening(grid, j.left_lead) + lead_broadening(grid, j.right_lead)
    F = _pole_function(grid, j)
    poles = []
    for k in range(len(grid) - 1):
        if gamma[k] > 0 or gamma[k + 1] > 0:
            continue
        if F[k] == 0:
            poles.append(float(grid[k]))
        elif F[k] * F[k + 1] < 0:
            poles.append(float(brentq(_pole_function, grid[k], grid[k + 1], args=(j,), xtol=1e-14)))
    return poles


def check_bound_states(j: Junction, settings=None, tol: float = 1e-4) -> float:
    """Evaluate the spectral sum rule once and raise if weight is missing.

    Returns the in-band spectral weight. Raises :class:`BoundStateError`
    naming any out-of-band pole when the deficit exceeds ``tol``.
    """
    from .quadrature import spectral_weight

    if j.left_lead.coupling == 0 and j.right_lead.coupling == 0:
        raise BoundStateError(
            f"decoupled level: all spectral weight sits in a delta peak at w={j.eps_qb!r}",
            deficit=1.0,
            poles=(j.eps_qb,),
        )
    weight = spectral_weight(j, settings).value
    deficit = 1.0 - weight
    if deficit > tol:
        poles = bound_state_poles(j)
        where = ", ".join(f"{p:.6g}" for p in poles) or "unresolved"
        raise BoundStateError(
            f"spectral sum rule deficit {deficit:.3e} > {tol:g}; out-of-band pole(s) at w = {where}",
            deficit=deficit,
            poles=poles,
        )
    return weight
