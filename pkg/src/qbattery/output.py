"""CSV and SVG writers for sweep rows."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import fields
from xml.sax.saxutils import escape, quoteattr

from .scenarios import SweepRow

CSV_COLUMNS = (
    "eps_qb", "mu_L", "mu_R", "T_L", "T_R", "I_Q", "J_E", "J_H_L", "J_H_R", "sigma",
    "N_ne", "E_ne", "S_ne", "W_ext_beta", "d_qb", "S_rho", "W_rho_beta", "regime", "quad_err",
)
ROW_FIELDS = tuple(f.name for f in fields(SweepRow))
TEXT_COLUMNS = ("regime",)


def _as_dict(row) -> dict:
    return row.as_dict() if isinstance(row, SweepRow) else dict(row)


def _emit(text: str, destination):
    if destination is None:
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_csv(rows, destination=None) -> str:
    """Write rows in sweep order and return the document.

    Floats use Python's shortest round-trip repr, so :func:`read_csv` gives
    back the identical values. Lines end in LF. ``destination`` may be a
    path, a text stream or ``None``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        d = _as_dict(row)
        w.writerow([d[c] if c in TEXT_COLUMNS else repr(float(d[c])) for c in CSV_COLUMNS])
    text = buf.getvalue()
    _emit(text, destination)
    return text


def read_csv(source) -> list[dict]:
    """Parse a document from :func:`write_csv` (text, path or stream)."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        with open(source, encoding="utf-8", newline="") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    return [
        {k: (v if k in TEXT_COLUMNS else float(v)) for k, v in rec.items()}
        for rec in reader
    ]


WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=80, right=160, top=30, bottom=50)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
N_TICKS = 6


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") if float(v).is_integer() else f"{v:.4g}"


def _span(values):
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def emit_svg_chart(rows, x_column: str, y_columns, destination=None) -> str:
    """Line chart of ``y_columns`` against ``x_column``.

    One polyline per series in the given order, with a legend and a circle
    on the largest value of the first series. The marker carries the
    exact data coordinates in ``data-x``/``data-y``. Output depends only on
    the input, so repeated calls give identical bytes.
    """
    if isinstance(y_columns, str):
        y_columns = [y_columns]
    y_columns = list(y_columns)
    rows = [_as_dict(r) for r in rows]
    if len(rows) < 2:
        raise ValueError(f"a chart needs at least 2 rows, got {len(rows)}")
    if not y_columns:
        raise ValueError("no y columns given")
    available = [k for k in rows[0] if k not in TEXT_COLUMNS]
    for c in [x_column, *y_columns]:
        if c not in available:
            raise KeyError(f"unknown column {c!r}; available: {', '.join(available)}")

    xs = [float(r[x_column]) for r in rows]
    ys = {c: [float(r[c]) for r in rows] for c in y_columns}
    finite = [v for c in y_columns for v in ys[c] if math.isfinite(v)]
    if not finite:
        raise ValueError("no finite values to plot")
    x0, x1 = _span(xs)
    y0, y1 = _span(finite)
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<g class="axes" stroke="black" stroke-width="1">'
        f'<line x1="{MARGIN["left"]}" y1="{MARGIN["top"] + ph}" x2="{MARGIN["left"] + pw}" y2="{MARGIN["top"] + ph}"/>'
        f'<line x1="{MARGIN["left"]}" y1="{MARGIN["top"]}" x2="{MARGIN["left"]}" y2="{MARGIN["top"] + ph}"/></g>',
    ]
    ticks = []
    for k in range(N_TICKS):
        tx = x0 + (x1 - x0) * k / (N_TICKS - 1)
        ty = y0 + (y1 - y0) * k / (N_TICKS - 1)
        px, py = sx(tx), sy(ty)
        base = MARGIN["top"] + ph
        ticks.append(
            f'<line x1="{px:.2f}" y1="{base}" x2="{px:.2f}" y2="{base + 5}" stroke="black"/>'
            f'<text class="xtick" x="{px:.2f}" y="{base + 18}" text-anchor="middle">{_fmt(tx)}</text>'
        )
        ticks.append(
            f'<line x1="{MARGIN["left"] - 5}" y1="{py:.2f}" x2="{MARGIN["left"]}" y2="{py:.2f}" stroke="black"/>'
            f'<text class="ytick" x="{MARGIN["left"] - 8}" y="{py + 4:.2f}" text-anchor="end">{_fmt(ty)}</text>'
        )
    out.append('<g class="ticks">' + "".join(ticks) + "</g>")
    out.append(
        f'<text x="{MARGIN["left"] + pw / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(x_column)}</text>'
    )

    for n, c in enumerate(y_columns):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in zip(xs, ys[c]) if math.isfinite(y))
        out.append(
            f'<polyline data-series={quoteattr(c)} fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )

    lx = MARGIN["left"] + pw + 15
    legend = []
    for n, c in enumerate(y_columns):
        color = PALETTE[n % len(PALETTE)]
        ly = MARGIN["top"] + 10 + 18 * n
        legend.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
            f'<text x="{lx + 26}" y="{ly + 4}">{escape(c)}</text>'
        )
    out.append('<g class="legend">' + "".join(legend) + "</g>")

    first = ys[y_columns[0]]
    candidates = [i for i, v in enumerate(first) if math.isfinite(v)]
    if candidates:
        i = max(candidates, key=lambda k: (first[k], -k))
        out.append(
            f'<circle class="max-marker" cx="{sx(xs[i]):.3f}" cy="{sy(first[i]):.3f}" r="4" '
            f'fill="none" stroke="black" data-x="{xs[i]!r}" data-y="{first[i]!r}"/>'
        )
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    _emit(text, destination)
    return text
