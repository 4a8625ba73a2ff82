"""Non-equilibrium occupation of the battery level."""
from __future__ import annotations

import numpy as np

from .device import Junction
from .errors import OutOfSupportError
from .leads import fermi, fermi_log_terms, lead_broadening


def _weights(omega, j):
    gl = lead_broadening(omega, j.left_lead)
    gr = lead_broadening(omega, j.right_lead)
    return gl, gr, gl + gr


def ne_distribution(omega, j: Junction):
    """Coupling-weighted average ``(Gamma_L f_L + Gamma_R f_R) / (Gamma_L + Gamma_R)``.

    Evaluated as ``f_R + w_L (f_L - f_R)`` so that equal reservoirs return
    their Fermi function bit for bit. Raises :class:`OutOfSupportError` at
    energies where neither lead has states.
    """
    gl, gr, gt = _weights(omega, j)
    if np.any(gt <= 0):
        raise OutOfSupportError("NE distribution undefined where Gamma_L + Gamma_R = 0")
    fl, fr = fermi(omega, j.left), fermi(omega, j.right)
    return fr + (gl / gt) * (fl - fr)


def ne_log_terms(omega, j: Junction):
    """``(ln f_NE, ln(1 - f_NE), support_mask)`` computed in the log domain.

    Off the support (zero total broadening) both logs are set to ``ln 1/2``
    and the mask is False; callers multiply by A_QB, which vanishes there.
    """
    gl, gr, gt = _weights(omega, j)
    mask = gt > 0
    safe = np.where(mask, gt, 1.0)
    with np.errstate(divide="ignore"):
        lwl = np.log(np.where(mask, gl / safe, 0.5))
        lwr = np.log(np.where(mask, gr / safe, 0.5))
    lfl, lgl = fermi_log_terms(omega, j.left)
    lfr, lgr = fermi_log_terms(omega, j.right)
    half = np.log(0.5)
    lf = np.where(mask, np.logaddexp(lwl + lfl, lwr + lfr), half)
    l1f = np.where(mask, np.logaddexp(lwl + lgl, lwr + lgr), half)
    return lf, l1f, mask
