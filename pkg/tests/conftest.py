"""Shared fixtures and an independent dense-grid oracle.

The oracle rebuilds the lead self-energy from the closed-form surface Green
function of a semi-infinite chain, using numpy's principal complex sqrt,
and integrates on a uniform 10^6-point trapezoid. It reuses nothing from
the package's self-energy or quadrature code.
"""
import numpy as np
import pytest
from scipy.special import xlogy

from qbattery.scenarios import SweepConfig

ACCEPTANCE_LINES = []


def surface_sigma(w, eps_a=0.0, h=1.0, nu=0.12):
    x = np.asarray(w, dtype=complex) - eps_a
    g = (x - np.sqrt(x - 2 * h) * np.sqrt(x + 2 * h)) / (2 * h * h)
    return nu * nu * g


def _fd(w, mu, t):
    with np.errstate(over="ignore"):
        return 1.0 / (np.exp((w - mu) / t) + 1.0)


class Oracle:
    """Dense trapezoid evaluation of the observables at one drive point."""

    def __init__(self, eps_qb, mu_l, t_l, mu_r, t_r, mu_eq, t_eq, nu_l=0.12, nu_r=0.12, h=1.0, eps_a=0.0,
                 points=1_000_000):
        self.w = np.linspace(eps_a - 2 * h, eps_a + 2 * h, points)
        w = self.w
        sl, sr = surface_sigma(w, eps_a, h, nu_l), surface_sigma(w, eps_a, h, nu_r)
        g = 1.0 / (w - eps_qb - sl - sr)
        self.gl, self.gr = -2 * sl.imag, -2 * sr.imag
        self.a = -g.imag / np.pi
        self.tau = self.gl * self.gr * np.abs(g) ** 2
        self.fl, self.fr = _fd(w, mu_l, t_l), _fd(w, mu_r, t_r)
        self.feq = _fd(w, mu_eq, t_eq)
        tot = self.gl + self.gr
        safe = np.where(tot > 0, tot, 1.0)
        self.fne = np.where(tot > 0, (self.gl * self.fl + self.gr * self.fr) / safe, 0.5)

    def _int(self, y):
        return float(np.trapezoid(y, self.w))

    def charge_current(self):
        return self._int(self.tau * (self.fl - self.fr)) / (2 * np.pi)

    def energy_current(self):
        return self._int(self.w * self.tau * (self.fl - self.fr)) / (2 * np.pi)

    def occupation(self, f=None):
        return self._int(self.a * (self.fne if f is None else f))

    def energy(self, f=None):
        return self._int(self.w * self.a * (self.fne if f is None else f))

    def exergy_beta(self):
        p, q = self.fne, self.feq
        kl = xlogy(p, p) - xlogy(p, q) + xlogy(1 - p, 1 - p) - xlogy(1 - p, 1 - q)
        return self._int(self.a * kl)


@pytest.fixture
def base():
    """Lead and equilibrium parameters of the reference figures."""
    return SweepConfig()


@pytest.fixture
def oracle_for():
    def make(j, **kw):
        return Oracle(
            j.eps_qb, j.left.mu, j.left.temperature, j.right.mu, j.right.temperature,
            j.eq_ref.mu, j.eq_ref.temperature,
            nu_l=j.left_lead.coupling, nu_r=j.right_lead.coupling,
            h=j.left_lead.hopping, eps_a=j.left_lead.band_center, **kw,
        )

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
