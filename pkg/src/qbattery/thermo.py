"""Occupation, energy, entropy and exergy of the battery level.

All integrals weight a function of the level occupation by the spectral
function A_QB over the hull of the lead bands. Entropies and relative
entropies are built from ``ln f`` and ``ln(1 - f)`` directly, never from
``f``, so cold reservoirs do not produce ``0 * log 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import Junction, spectral_function
from .distribution import ne_log_terms
from .leads import ReservoirState, fermi_log_terms
from .quadrature import physical_integral


@dataclass(frozen=True)
class ThermoRecord:
    particle_number: float
    energy: float
    entropy: float
    exergy_beta: float
    eq_particle_number: float
    eq_energy: float
    eq_entropy: float
    quad_error: float = 0.0


def _log_occupation(omega, j, dist):
    if dist == "ne":
        lf, l1f, _ = ne_log_terms(omega, j)
        return lf, l1f
    if dist == "eq":
        return fermi_log_terms(omega, j.eq_ref)
    raise ValueError(f"dist must be 'ne' or 'eq', got {dist!r}")


def _binary_entropy(lf, l1f):
    return -(np.exp(lf) * lf + np.exp(l1f) * l1f)


def _relative_entropy(lf, l1f, lg, l1g):
    # Gibbs' inequality: anything below zero is rounding
    return np.maximum(np.exp(lf) * (lf - lg) + np.exp(l1f) * (l1f - l1g), 0.0)


def exergy_integrand(omega, j: Junction, green=None):
    """Pointwise ``A(w) KL(f_NE(w) || f_eq(w))``; non-negative up to rounding."""
    lf, l1f, _ = ne_log_terms(omega, j)
    lg, l1g = fermi_log_terms(omega, j.eq_ref)
    a = spectral_function(omega, j) if green is None else _spectral(green)
    return a * _relative_entropy(lf, l1f, lg, l1g)


def _integral(integrand, j, settings):
    return physical_integral(integrand, j, "union", settings)


def _spectral(g):
    return -g.imag / np.pi


def particle_number(j: Junction, dist: str = "ne", settings=None) -> float:
    """``int A(w) f(w) dw`` with ``f`` the NE (``dist="ne"``) or equilibrium occupation."""

    def func(w, g):
        lf, _ = _log_occupation(w, j, dist)
        return _spectral(g) * np.exp(lf)

    return _integral(func, j, settings).value


def mean_energy(j: Junction, dist: str = "ne", settings=None) -> float:
    def func(w, g):
        lf, _ = _log_occupation(w, j, dist)
        return w * _spectral(g) * np.exp(lf)

    return _integral(func, j, settings).value


def ne_entropy(j: Junction, dist: str = "ne", settings=None) -> float:
    """``-int A [f ln f + (1 - f) ln(1 - f)] dw``."""

    def func(w, g):
        return _spectral(g) * _binary_entropy(*_log_occupation(w, j, dist))

    return _integral(func, j, settings).value


def exergy_beta(j: Junction, settings=None) -> float:
    """beta_eq times the maximum extractable work, as an A-weighted relative entropy."""
    return _integral(lambda w, g: exergy_integrand(w, j, g), j, settings).value


def thermo_integrands(omega, j: Junction, green=None):
    """Stack of the seven integrands of :class:`ThermoRecord`, in field order."""
    a = spectral_function(omega, j) if green is None else _spectral(green)
    lf, l1f, _ = ne_log_terms(omega, j)
    lg, l1g = fermi_log_terms(omega, j.eq_ref)
    f, g = np.exp(lf), np.exp(lg)
    return np.stack([
        a * f,
        a * omega * f,
        a * _binary_entropy(lf, l1f),
        a * _relative_entropy(lf, l1f, lg, l1g),
        a * g,
        a * omega * g,
        a * _binary_entropy(lg, l1g),
    ])


def thermo_record(j: Junction, settings=None) -> ThermoRecord:
    """Evaluate N, E, S, exergy and their equilibrium references on one mesh."""
    res = _integral(lambda w, g: thermo_integrands(w, j, g), j, settings)
    v = [float(x) for x in res.value]
    return ThermoRecord(*v, quad_error=float(np.max(res.error_estimate)))


def grand_potential(rec: ThermoRecord, ref: ReservoirState, equilibrium: bool = False) -> float:
    """``Lambda = E - mu N - T S`` of the NE state, or of the reference state if ``equilibrium``."""
    if equilibrium:
        e, n, s = rec.eq_energy, rec.eq_particle_number, rec.eq_entropy
    else:
        e, n, s = rec.energy, rec.particle_number, rec.entropy
    return e - ref.mu * n - ref.temperature * s


def exergy_decomposition(rec: ThermoRecord, ref: ReservoirState) -> float:
    """``beta [(E - mu N) - (E_eq - mu N_eq)] - (S - S_eq)``, equal to the exergy.

    Follows ``Lambda = E - mu N - T S``; the ``+mu/T (N - N_eq)`` sign that
    shows up in some write-ups of this relation does not satisfy it.
    """
    return ref.beta * (grand_potential(rec, ref) - grand_potential(rec, ref, equilibrium=True))
