"""``qbattery`` command line: point, sweep, optimize, validate, chart.

Exit status: 0 success, 1 validation failure, 2 configuration, bound-state
or file error, 3 numerical failure. Every failure prints one line
``qbattery: error: <kind>: <message>`` on stderr.
"""
from __future__ import annotations

import argparse
import re
import sys

from .config import RunConfig, load_config, override, parse_grid
from .errors import (
    BoundStateError, ConfigError, DegeneratePoleError, DomainError, NonConvergenceError, OutOfSupportError,
)
from .output import emit_svg_chart, read_csv, write_csv
from .scenarios import AXES, SweepRow, optimize_exergy, run_point, run_sweep
from .validation import validate

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbattery", description="Steady-state single-level quantum battery.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grids=True):
        sp.add_argument("--config", help="run configuration file")
        if grids:
            sp.add_argument("--dmu", help="bias: value or start,stop,steps")
            sp.add_argument("--dt", help="temperature offset: value or start,stop,steps")
            sp.add_argument("--eps-qb", dest="eps_qb", help="battery level: value or start,stop,steps")

    sp = sub.add_parser("point", help="all observables at one junction")
    common(sp)
    sp.add_argument("--out", help="write a one-row CSV here instead of printing")

    sp = sub.add_parser("sweep", help="grid sweep written as CSV")
    common(sp)
    sp.add_argument("--out", help="CSV destination (default: config csv_path, else stdout)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")

    sp = sub.add_parser("optimize", help="maximise the exergy along one axis")
    common(sp)
    sp.add_argument("--axis", choices=AXES, default="eps_qb")
    sp.add_argument("--tol", type=float, default=1e-7, help="golden-section tolerance")

    sp = sub.add_parser("validate", help="run the self-validation suite")
    common(sp, grids=False)

    sp = sub.add_parser("chart", help="SVG line chart of a sweep")
    common(sp)
    sp.add_argument("--csv", help="chart an existing CSV instead of running the sweep")
    sp.add_argument("--x", help="x column (default: dmu for a fresh sweep, mu_L for a CSV)")
    sp.add_argument("--y", default="W_ext_beta", help="comma-separated y columns")
    sp.add_argument("--out", help="SVG destination (default: config svg_path, else stdout)")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    changes = {}
    for flag, key in (("dmu", "dmu"), ("dt", "dt"), ("eps_qb", "eps_qb_grid")):
        text = getattr(args, flag, None)
        if text is not None:
            try:
                changes[key] = parse_grid(text)
            except ConfigError as exc:
                raise ConfigError(f"--{flag.replace('_', '-')}: {exc}") from None
    return override(cfg, **changes) if changes else cfg


def _single(cfg: RunConfig):
    vals = []
    for axis in AXES:
        g = cfg.sweep.grid(axis)
        if g.steps != 1:
            raise ConfigError(f"'point' needs a single value for {axis}, got {g.steps} steps")
        vals.append(float(g.start))
    return vals


def _write_text(text: str, path):
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def cmd_point(args) -> int:
    cfg = _config(args)
    dmu, dt, eps = _single(cfg)
    row = run_point(cfg.sweep.junction(dmu, dt, eps), cfg.quadrature, cfg.ref_mode)
    if args.out:
        _write_text(write_csv([row]), args.out)
    else:
        for k, v in row.as_dict().items():
            print(f"{k} = {v if isinstance(v, str) else repr(float(v))}")
    return EXIT_OK


def _rows(cfg: RunConfig, jobs: int) -> list[SweepRow]:
    return run_sweep(cfg.sweep, cfg.quadrature, cfg.ref_mode, n_jobs=jobs)


def cmd_sweep(args) -> int:
    cfg = _config(args)
    _write_text(write_csv(_rows(cfg, args.jobs)), args.out or cfg.csv_path)
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _config(args)
    x, w = optimize_exergy(cfg.sweep, args.axis, cfg.quadrature, tol=args.tol)
    print(f"{args.axis} = {x!r}")
    print(f"W_ext_beta = {w!r}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = validate(_config(args))
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_chart(args) -> int:
    cfg = _config(args)
    if args.csv:
        try:
            rows = read_csv(args.csv)
        except OSError as exc:
            raise OSError(f"cannot read {args.csv}: {exc.strerror}") from None
    else:
        rows = _rows(cfg, args.jobs)
    ys = [c.strip() for c in args.y.split(",") if c.strip()]
    try:
        svg = emit_svg_chart(rows, args.x or ("mu_L" if args.csv else "dmu"), ys)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    _write_text(svg, args.out or cfg.svg_path)
    return EXIT_OK


COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "validate": cmd_validate,
    "chart": cmd_chart,
}


def _fail(kind: str, exc: BaseException, code: int) -> int:
    msg = " ".join(str(exc).split())
    print(f"qbattery: error: {kind}: {msg}", file=sys.stderr)
    return code


GRID_FLAGS = ("--dmu", "--dt", "--eps-qb")
NEGATIVE = re.compile(r"^-[0-9.]")


def _glue_negative_grids(argv):
    # argparse reads "-0.5,1,31" as an option; bind it to its flag instead
    out, it = [], iter(argv)
    for tok in it:
        if tok in GRID_FLAGS:
            nxt = next(it, None)
            if nxt is not None and NEGATIVE.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _build_parser().parse_args(_glue_negative_grids(argv))
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except BoundStateError as exc:
        return _fail("bound-state", exc, EXIT_CONFIG)
    except OSError as exc:
        return _fail("io", exc, EXIT_CONFIG)
    except NonConvergenceError as exc:
        return _fail("non-convergence", exc, EXIT_NUMERIC)
    except (DegeneratePoleError, OutOfSupportError, DomainError) as exc:
        return _fail("numeric", exc, EXIT_NUMERIC)
    except ValueError as exc:
        return _fail("config", exc, EXIT_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
