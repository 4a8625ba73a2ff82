"""Steady-state thermodynamics of a single-level quantum battery between two leads."""
from .approx import ApproxRecord, Comparison, approx_record, compare_approaches
from .config import RunConfig, load_config, parse_config, serialize_config
from .device import DeviceSpec, Junction, check_bound_states, retarded_green, spectral_function, transmission
from .distribution import ne_distribution
from .errors import (
    BoundStateError, ConfigError, DegeneratePoleError, DomainError, NonConvergenceError,
    OutOfSupportError, QBatteryError,
)
from .estimator import SteadyStateBattery
from .leads import LeadSpec, ReservoirState, fermi, lead_broadening, lead_self_energy
from .output import CSV_COLUMNS, emit_svg_chart, read_csv, write_csv
from .quadrature import QuadratureSettings, integrate
from .scenarios import Grid, Regime, SweepConfig, SweepRow, classify_regime, optimize_exergy, run_point, run_sweep
from .thermo import ThermoRecord, exergy_beta, thermo_record
from .transport import TransportRecord, transport_record
from .validation import validate

__all__ = [
    "ApproxRecord", "BoundStateError", "CSV_COLUMNS", "Comparison", "ConfigError", "DegeneratePoleError",
    "DeviceSpec", "DomainError", "Grid", "Junction", "LeadSpec", "NonConvergenceError", "OutOfSupportError",
    "QBatteryError", "QuadratureSettings", "Regime", "ReservoirState", "RunConfig", "SteadyStateBattery",
    "SweepConfig", "SweepRow", "ThermoRecord", "TransportRecord", "approx_record", "check_bound_states",
    "classify_regime", "compare_approaches", "emit_svg_chart", "exergy_beta", "fermi", "integrate",
    "lead_broadening", "lead_self_energy", "load_config", "ne_distribution", "optimize_exergy", "parse_config",
    "read_csv", "retarded_green", "run_point", "run_sweep", "serialize_config", "spectral_function",
    "thermo_record", "transmission", "transport_record", "validate", "write_csv",
]
