"""scikit-learn style facade over the sweep engine.

>>> est = SteadyStateBattery(eps_qb=0.4).fit()
>>> est.regime_
'off_resonant_empty'
>>> W = est.predict([[0.5, 0.0, 0.4]])

Each input row is a drive point ``(dmu, dT, eps_qb)``; ``transform`` maps it
to the numeric observables of a sweep row.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .approx import REF_MODES
from .device import check_bound_states
from .quadrature import QuadratureSettings
from .scenarios import SweepConfig, SweepRow, regime_from_occupation, run_point
from .thermo import particle_number

INPUT_FEATURES = ("dmu", "dT", "eps_qb")
NUMERIC_COLUMNS = tuple(
    name for name in SweepRow.__dataclass_fields__ if name not in ("regime",) + INPUT_FEATURES
)


def _run(args):
    j, settings, ref_mode = args
    return run_point(j, settings, ref_mode, check=False)


class SteadyStateBattery(TransformerMixin, BaseEstimator):
    """Single-level battery between two tight-binding leads.

    ``fit`` validates the parameters and checks the spectral sum rule at
    the base level ``eps_qb``; it does not look at ``X``. ``transform``
    evaluates every requested drive point, each with its own bound-state
    check when its level differs from the fitted one.

    Parameters
    ----------
    eps_alpha, h_alpha : float
        Band centre and hopping of both leads.
    nu_left, nu_right : float
        Level-lead couplings.
    mu_eq, t_eq : float
        Equilibrium point the drive is applied around.
    eps_qb : float
        Base battery level used by ``fit``.
    drive_side : {"left", "symmetric"}
    ref_mode : {"broadened", "isolated_level"}
        Reference occupation of the approximate exergy.
    abs_tol, rel_tol, max_subdiv
        Quadrature settings.
    n_jobs : int
        Worker processes for ``transform``.
    columns : sequence of str or None
        Output columns of ``transform``; all numeric sweep columns if None.
    """

    def __init__(
        self,
        eps_alpha=0.0,
        h_alpha=1.0,
        nu_left=0.12,
        nu_right=0.12,
        mu_eq=0.1,
        t_eq=0.1,
        eps_qb=0.1,
        drive_side="left",
        ref_mode="broadened",
        abs_tol=1e-12,
        rel_tol=1e-9,
        max_subdiv=2000,
        n_jobs=1,
        columns=None,
    ):
        self.eps_alpha = eps_alpha
        self.h_alpha = h_alpha
        self.nu_left = nu_left
        self.nu_right = nu_right
        self.mu_eq = mu_eq
        self.t_eq = t_eq
        self.eps_qb = eps_qb
        self.drive_side = drive_side
        self.ref_mode = ref_mode
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.max_subdiv = max_subdiv
        self.n_jobs = n_jobs
        self.columns = columns

    def _validated(self):
        if self.ref_mode not in REF_MODES:
            raise ValueError(f"ref_mode must be one of {REF_MODES}, got {self.ref_mode!r}")
        cols = NUMERIC_COLUMNS if self.columns is None else tuple(self.columns)
        unknown = [c for c in cols if c not in NUMERIC_COLUMNS]
        if unknown or not cols:
            raise ValueError(f"unknown or empty columns {unknown}; choose from {NUMERIC_COLUMNS}")
        cfg = SweepConfig(
            eps_alpha=float(self.eps_alpha), h_alpha=float(self.h_alpha),
            nu_left=float(self.nu_left), nu_right=float(self.nu_right),
            mu_eq=float(self.mu_eq), t_eq=float(self.t_eq), eps_qb=float(self.eps_qb),
            drive_side=self.drive_side,
        )
        settings = QuadratureSettings(float(self.abs_tol), float(self.rel_tol), int(self.max_subdiv))
        return cfg, settings, cols

    def fit(self, X=None, y=None):
        cfg, settings, cols = self._validated()
        j = cfg.junction()
        self.sum_rule_ = check_bound_states(j, settings)
        self.eq_occupation_ = particle_number(j, "eq", settings)
        self.regime_ = regime_from_occupation(self.eq_occupation_).value
        self.n_features_in_ = len(INPUT_FEATURES)
        self.feature_names_out_ = np.array(cols, dtype=object)
        self._cfg, self._settings = cfg, settings
        return self

    def _rows(self, X):
        check_is_fitted(self, "sum_rule_")
        X = check_array(X, dtype=np.float64, ensure_min_samples=1)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features; expected {self.n_features_in_} (dmu, dT, eps_qb)")
        checked = {float(self._cfg.eps_qb)}
        for eps in np.unique(X[:, 2]):
            if float(eps) not in checked:
                check_bound_states(self._cfg.junction(eps_qb=float(eps)), self._settings)
                checked.add(float(eps))
        tasks = [(self._cfg.junction(*map(float, x)), self._settings, self.ref_mode) for x in X]
        if self.n_jobs and self.n_jobs > 1 and len(tasks) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=self.n_jobs) as pool:
                return list(pool.map(_run, tasks))
        return [_run(t) for t in tasks]

    def transform(self, X):
        """Array ``(n_samples, n_columns)`` of observables at each drive point."""
        rows = self._rows(X)
        cols = list(self.feature_names_out_)
        return np.array([[getattr(r, c) for c in cols] for r in rows], dtype=np.float64)

    def predict(self, X):
        """Exergy ``beta_eq W_ext`` at each drive point."""
        return np.array([r.W_ext_beta for r in self._rows(X)], dtype=np.float64)

    def regimes(self, X):
        """Regime label of each drive point's level."""
        return np.array([r.regime for r in self._rows(X)], dtype=object)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_.copy()

