"""Landauer charge, energy and heat currents and the entropy production rate.

Currents are per spinless channel with prefactor 1/(2 pi). ``I_Q > 0``
means electrons flowing from the left reservoir to the right one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import Junction
from .leads import fermi, lead_broadening
from .quadrature import IntegralResult, physical_integral


@dataclass(frozen=True)
class TransportRecord:
    charge_current: float
    energy_current: float
    heat_current_left: float
    heat_current_right: float
    entropy_production: float
    quad_error: float


def _window(w, g, j):
    tau = lead_broadening(w, j.left_lead) * lead_broadening(w, j.right_lead) * (g.real**2 + g.imag**2)
    return tau * (fermi(w, j.left) - fermi(w, j.right))


def _current_integral(integrand, j, settings) -> IntegralResult:
    return physical_integral(integrand, j, "intersection", settings)


def charge_current(j: Junction, settings=None) -> float:
    """``I_Q = (1/2pi) int tau(w) (f_L - f_R) dw`` over the band overlap."""
    return _current_integral(lambda w, g: _window(w, g, j), j, settings).value / (2 * np.pi)


def energy_current(j: Junction, settings=None) -> float:
    """``J_E = (1/2pi) int tau(w) w (f_L - f_R) dw``."""
    return _current_integral(lambda w, g: w * _window(w, g, j), j, settings).value / (2 * np.pi)


def heat_current(j: Junction, side: str, settings=None) -> float:
    """``J_H = J_E - mu_side I_Q`` for ``side`` in {"left", "right"}."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    rec = transport_record(j, settings)
    return rec.heat_current_left if side == "left" else rec.heat_current_right


def affinities(j: Junction) -> tuple[float, float]:
    """``(beta_L mu_L - beta_R mu_R, beta_L - beta_R)``."""
    bl, br = j.left.beta, j.right.beta
    return bl * j.left.mu - br * j.right.mu, bl - br


def entropy_production(j: Junction, settings=None) -> float:
    """``sigma = Delta_mu I_Q - (beta_L - beta_R) J_E`` (non-negative)."""
    return transport_record(j, settings).entropy_production


def entropy_identity(j: Junction, rec: TransportRecord) -> float:
    """``-beta_L J_H^L + beta_R J_H^R``, algebraically equal to sigma."""
    return -j.left.beta * rec.heat_current_left + j.right.beta * rec.heat_current_right


def transport_record(j: Junction, settings=None) -> TransportRecord:
    """All currents from one shared quadrature mesh.

    Sharing the mesh makes sigma a positively weighted sum of the pointwise
    non-negative ``tau (f_L - f_R)(Delta_mu - Delta_beta w)``, so it cannot
    come out negative from integration error.
    """
    def both(w, g):
        win = _window(w, g, j)
        return np.stack([win, w * win])

    res = _current_integral(both, j, settings)
    iq, je = np.asarray(res.value, dtype=float) / (2 * np.pi)
    iq, je = float(iq), float(je)
    d_mu, d_beta = affinities(j)
    return TransportRecord(
        charge_current=iq,
        energy_current=je,
        heat_current_left=je - j.left.mu * iq,
        heat_current_right=je - j.right.mu * iq,
        entropy_production=d_mu * iq - d_beta * je,
        quad_error=float(np.max(res.error_estimate)) / (2 * np.pi),
    )
