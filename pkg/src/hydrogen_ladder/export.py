"""CSV / JSON / SVG emitters used by the command-line front end.

Output is byte-stable: floats are written with ``repr`` (shortest round-trip
form), JSON keys keep insertion order and files end with a newline.
"""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .operators import OperatorMatrix

__all__ = [
    "format_number",
    "format_complex",
    "csv_text",
    "write_text",
    "json_text",
    "matrix_rows",
    "matrix_to_json",
    "load_schema",
    "svg_line_chart",
]


def format_number(v) -> str:
    v = float(v)
    if v == 0.0:
        return "0.0"
    return repr(v)


def format_complex(v) -> str:
    """``re+imi`` form, e.g. ``0.0+0.7071067811865476i``."""
    v = complex(v)
    im = format_number(v.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{format_number(v.real)}{sign}{im}i"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else format_number(c) if not isinstance(c, int) else str(c) for c in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def matrix_rows(op: OperatorMatrix) -> list[list[str]]:
    m = op.entries
    if np.all(m.imag == 0):
        return [[format_number(v) for v in row] for row in m.real]
    return [[format_complex(v) for v in row] for row in m]


def matrix_to_json(op: OperatorMatrix) -> dict:
    m = op.entries
    return {
        "kind": op.kind,
        "l": op.basis.l,
        "n_max": op.basis.n_max,
        "dim": op.basis.dim,
        "n_values": [int(n) for n in op.basis.n_values],
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def load_schema(name: str) -> dict:
    text = resources.files("hydrogen_ladder").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def svg_line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 400,
) -> str:
    """Minimal SVG 1.1 line chart; ``series`` is a list of ``(label, x, y)``."""
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(min(ys.min(), 0.0)), float(max(ys.max(), 0.0))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{mt + ph}" x2="{px(t):.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px(t):.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle">{t:g}</text>'
        )
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{py(t):.2f}" x2="{ml}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{py(t) + 4:.2f}" font-size="11" text-anchor="end">{t:g}</text>')
    if y0 < 0 < y1:
        out.append(
            f'<line x1="{ml}" y1="{py(0):.2f}" x2="{ml + pw}" y2="{py(0):.2f}" stroke="#999" stroke-dasharray="4 3"/>'
        )
    for i, (label, x, y) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{ml + pw - 10}" y="{mt + 16 + 14 * i}" font-size="12" text-anchor="end" '
            f'fill="{color}">{escape(label)}</text>'
        )
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="22" font-size="14" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(
            f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{mt + ph / 2:.1f}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
