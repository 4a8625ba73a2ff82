"""Sectioned ``key = value`` run configuration.

Example::

    [leads]
    eps_alpha = 0
    h_alpha = 1.0
    nu_left = 0.12
    nu_right = 0.12      # nu_alpha sets both couplings

    [equilibrium]
    mu_eq = 0.1
    t_eq = 0.1

    [device]
    eps_qb = 0.4

    [sweep]
    dmu = 0, 0.7, 15     # start, stop, steps; a bare number is a single point
    dt = -0.05, 0.05, 3
    drive_side = left    # or symmetric

    [numerics]
    abs_tol = 1e-12
    rel_tol = 1e-9
    max_subdiv = 2000
    ref_mode = broadened # or isolated_level

    [output]
    csv_path = sweep.csv
    svg_path = sweep.svg

``#`` starts a comment. Unknown sections or keys, repeated keys and
out-of-range values are errors that report their line number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .approx import REF_MODES
from .errors import ConfigError
from .quadrature import QuadratureSettings
from .scenarios import Grid, SweepConfig

SECTIONS = {
    "leads": ("eps_alpha", "h_alpha", "nu_left", "nu_right", "nu_alpha"),
    "equilibrium": ("mu_eq", "t_eq"),
    "device": ("eps_qb",),
    "sweep": ("dmu", "dt", "eps_qb", "drive_side"),
    "numerics": ("abs_tol", "rel_tol", "max_subdiv", "ref_mode"),
    "output": ("csv_path", "svg_path"),
}


@dataclass(frozen=True)
class RunConfig:
    sweep: SweepConfig = field(default_factory=SweepConfig)
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    ref_mode: str = "broadened"
    csv_path: str | None = None
    svg_path: str | None = None

    def __post_init__(self):
        if self.ref_mode not in REF_MODES:
            raise ValueError(f"ref_mode must be one of {REF_MODES}, got {self.ref_mode!r}")


def _float(text, line, *, positive=False, nonneg=False):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line) from None
    if not math.isfinite(v):
        raise ConfigError(f"value must be finite, got {text!r}", line)
    if positive and v <= 0:
        raise ConfigError(f"value must be > 0, got {text!r}", line)
    if nonneg and v < 0:
        raise ConfigError(f"value must be >= 0, got {text!r}", line)
    return v


def _int(text, line, minimum=1):
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", line) from None
    if v < minimum:
        raise ConfigError(f"value must be >= {minimum}, got {text!r}", line)
    return v


def parse_grid(text: str, line: int | None = None) -> Grid:
    """``"start, stop, steps"`` or a single number."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return Grid.point(_float(parts[0], line))
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'start, stop, steps', got {text!r}", line)
    return Grid(_float(parts[0], line), _float(parts[1], line), _int(parts[2], line))


def _choice(text, options, line):
    if text not in options:
        raise ConfigError(f"expected one of {', '.join(options)}, got {text!r}", line)
    return text


def parse_config(text: str) -> RunConfig:
    """Parse a configuration document; missing keys keep the default parameters."""
    sweep, numerics, output = {}, {}, {}
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if section is None:
            raise ConfigError(f"key {key!r} appears before any [section]", lineno)
        if key not in SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        if (section, key) in seen:
            raise ConfigError(f"duplicate key {key!r} in [{section}]", lineno)
        seen.add((section, key))
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)

        if section == "leads":
            if key == "eps_alpha":
                sweep["eps_alpha"] = _float(value, lineno)
            elif key == "h_alpha":
                sweep["h_alpha"] = _float(value, lineno, positive=True)
            elif key == "nu_alpha":
                sweep["nu_left"] = sweep["nu_right"] = _float(value, lineno, nonneg=True)
            else:
                sweep[key] = _float(value, lineno, nonneg=True)
        elif section == "equilibrium":
            sweep[key] = _float(value, lineno, positive=(key == "t_eq"))
        elif section == "device":
            sweep["eps_qb"] = _float(value, lineno)
        elif section == "sweep":
            if key == "drive_side":
                sweep["drive_side"] = _choice(value, ("left", "symmetric"), lineno)
            else:
                sweep["eps_qb_grid" if key == "eps_qb" else key] = parse_grid(value, lineno)
        elif section == "numerics":
            if key == "ref_mode":
                output["ref_mode"] = _choice(value, REF_MODES, lineno)
            elif key == "max_subdiv":
                numerics["max_subdivisions"] = _int(value, lineno)
            else:
                numerics[key] = _float(value, lineno, positive=True)
        else:
            output[key] = value

    try:
        return RunConfig(
            sweep=SweepConfig(**sweep),
            quadrature=QuadratureSettings(**numerics),
            **output,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def _fmt_grid(g: Grid) -> str:
    return f"{float(g.start)!r}, {float(g.stop)!r}, {g.steps}"


def serialize_config(cfg: RunConfig) -> str:
    """Render ``cfg`` in the format :func:`parse_config` reads back to an equal config."""
    s, q = cfg.sweep, cfg.quadrature
    out = [
        "[leads]",
        f"eps_alpha = {s.eps_alpha!r}",
        f"h_alpha = {s.h_alpha!r}",
        f"nu_left = {s.nu_left!r}",
        f"nu_right = {s.nu_right!r}",
        "",
        "[equilibrium]",
        f"mu_eq = {s.mu_eq!r}",
        f"t_eq = {s.t_eq!r}",
        "",
        "[device]",
        f"eps_qb = {s.eps_qb!r}",
        "",
        "[sweep]",
    ]
    for key, g in (("dmu", s.dmu), ("dt", s.dt), ("eps_qb", s.eps_qb_grid)):
        if g is not None:
            out.append(f"{key} = {_fmt_grid(g)}")
    out += [
        f"drive_side = {s.drive_side}",
        "",
        "[numerics]",
        f"abs_tol = {q.abs_tol!r}",
        f"rel_tol = {q.rel_tol!r}",
        f"max_subdiv = {q.max_subdivisions}",
        f"ref_mode = {cfg.ref_mode}",
    ]
    paths = [(k, getattr(cfg, k)) for k in ("csv_path", "svg_path") if getattr(cfg, k)]
    if paths:
        out += ["", "[output]"] + [f"{k} = {v}" for k, v in paths]
    return "\n".join(out) + "\n"


def override(cfg: RunConfig, **changes) -> RunConfig:
    """Copy of ``cfg`` with sweep-level (``SweepConfig``) or run-level fields replaced."""
    run_keys = {f.name for f in fields(RunConfig)}
    run = {k: v for k, v in changes.items() if k in run_keys}
    sweep = {k: v for k, v in changes.items() if k not in run_keys}
    try:
        return replace(cfg, sweep=replace(cfg.sweep, **sweep), **run)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
