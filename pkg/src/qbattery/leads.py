"""Reservoir statistics and semi-infinite tight-binding lead self-energies.

Units are natural: hbar = e = k_B = 1, so temperatures and energies share
a scale.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit


@dataclass(frozen=True)
class LeadSpec:
    """Static geometry of one 1D tight-binding reservoir.

    Parameters
    ----------
    band_center : float
        On-site energy of the chain.
    hopping : float
        Nearest-neighbour hopping, strictly positive.
    coupling : float
        Hopping between the chain end and the battery level, non-negative.
    """

    band_center: float = 0.0
    hopping: float = 1.0
    coupling: float = 0.12

    def __post_init__(self):
        if not np.isfinite(self.band_center):
            raise ValueError(f"band_center must be finite, got {self.band_center!r}")
        if not (np.isfinite(self.hopping) and self.hopping > 0):
            raise ValueError(f"hopping must be > 0, got {self.hopping!r}")
        if not (np.isfinite(self.coupling) and self.coupling >= 0):
            raise ValueError(f"coupling must be >= 0, got {self.coupling!r}")

    @property
    def band(self) -> tuple[float, float]:
        return (self.band_center - 2.0 * self.hopping, self.band_center + 2.0 * self.hopping)


@dataclass(frozen=True)
class ReservoirState:
    """Chemical potential and temperature of a reservoir (T > 0)."""

    mu: float
    temperature: float

    def __post_init__(self):
        if not np.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu!r}")
        if not (np.isfinite(self.temperature) and self.temperature > 0):
            raise ValueError(f"temperature must be > 0, got {self.temperature!r}")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


def _reduced(omega, res):
    return (np.asarray(omega, dtype=float) - res.mu) / res.temperature


def fermi(omega, res: ReservoirState):
    """Fermi-Dirac occupation ``1 / (exp(beta (w - mu)) + 1)``."""
    return expit(-_reduced(omega, res))


def fermi_log_terms(omega, res: ReservoirState):
    """Return ``(ln f, ln(1 - f))`` without forming ``f``.

    Both are minus a softplus of ``+-beta (w - mu)`` and stay finite for any
    finite argument.
    """
    x = _reduced(omega, res)
    return log_expit(-x), log_expit(x)


def _chain_root(x):
    # root of z + 1/z = x with |z| <= 1; Im z <= 0 inside |x| <= 2
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 2.0
    s = np.sqrt(np.abs(0.25 * x * x - 1.0))
    z = np.where(inside, 0.5 * x - 1j * s, 0.5 * x - np.sign(x) * s)
    return z


def lead_self_energy(omega, lead: LeadSpec):
    """Retarded self-energy the lead induces on the battery level.

    ``Sigma = (nu^2 / h) z`` where ``z`` is the root of
    ``z + 1/z = (w - eps_alpha) / h`` on the unit disk, taking ``Im z <= 0``
    inside the band. Outside the band ``z`` is real, so ``Sigma`` is real and
    continuous across the edges.

    The surface Green function of the chain depends on ``h`` only through
    ``h^2``, so ``Re Sigma`` has the sign of ``w - eps_alpha``. This is the
    branch for which ``Re Sigma`` is the Hilbert transform of ``Gamma`` and the
    spectral function integrates to one. Above the band ``Sigma`` is
    positive, below it negative.
    """
    x = (np.asarray(omega, dtype=float) - lead.band_center) / lead.hopping
    return (lead.coupling**2 / lead.hopping) * _chain_root(x)


def lead_broadening(omega, lead: LeadSpec):
    """``Gamma = -2 Im Sigma``; identically zero outside the band."""
    return -2.0 * np.imag(lead_self_energy(omega, lead))
