"""Deterministic CSV tables and dependency-light SVG line and contour plots."""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

import contourpy
import numpy as np

_FMT = "{:.10e}"


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    v = float(v)
    if v == 0.0:
        v = 0.0  # drop the sign of negative zero
    return _FMT.format(v)


def csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows))


def read_csv(path):
    """Return (header, float array). Raises FileNotFoundError if absent."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(x) for x in row] for row in reader if row]
    return header, np.array(data, dtype=float).reshape(len(data), len(header))


def complex_table(axis_name: str, axis, values):
    """Header and columns: axis then re/im pairs per row of ``values``."""
    values = np.atleast_2d(values)
    header = [axis_name]
    for j in range(values.shape[0]):
        header += [f"re_{j + 1}", f"im_{j + 1}"]
    cols = [np.asarray(axis)]
    for v in values:
        cols += [v.real, v.imag]
    return header, np.column_stack(cols)


# --------------------------------------------------------------------------- SVG

_W, _H, _M = 480, 360, 56
_PALETTE = ["#1f4e99", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555"]


def _scale(lo, hi, a, b):
    if hi == lo:
        hi = lo + 1.0
    return lambda v: a + (np.asarray(v) - lo) * (b - a) / (hi - lo)


def _frame(title, xlabel, ylabel, xlim, ylim):
    x0, x1 = _M, _W - 16
    y0, y1 = _H - _M + 10, 28
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>',
        f'<text x="{_W / 2:.1f}" y="18" text-anchor="middle" font-size="13">{title}</text>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2:.1f})">{ylabel}</text>',
    ]
    for v in np.linspace(*xlim, 5):
        px = _scale(*xlim, x0, x1)(v)
        parts.append(f'<text x="{px:.1f}" y="{y0 + 14}" text-anchor="middle" font-size="10">{v:.3g}</text>')
    for v in np.linspace(*ylim, 5):
        py = _scale(*ylim, y0, y1)(v)
        parts.append(f'<text x="{x0 - 4}" y="{py + 3:.1f}" text-anchor="end" font-size="10">{v:.3g}</text>')
    return parts, _scale(*xlim, x0, x1), _scale(*ylim, y0, y1)


def line_plot_svg(x, ys, labels=None, title="", xlabel="", ylabel="") -> str:
    x = np.asarray(x, float)
    ys = [np.asarray(y, float) for y in np.atleast_2d(ys)]
    finite = np.concatenate([y[np.isfinite(y)] for y in ys])
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    pad = 0.05 * (hi - lo if hi > lo else 1.0)
    parts, sx, sy = _frame(title, xlabel, ylabel, (float(x.min()), float(x.max())), (lo - pad, hi + pad))
    for k, y in enumerate(ys):
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx(x), sy(y)) if np.isfinite(b))
        color = _PALETTE[k % len(_PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        if labels:
            parts.append(
                f'<text x="{_W - 24}" y="{44 + 14 * k}" text-anchor="end" font-size="11" fill="{color}">'
                f"{labels[k]}</text>"
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def contour_plot_svg(x, p, values, levels=12, title="", xlabel="x", ylabel="p") -> str:
    """Iso-lines of ``values[i, j]`` sampled at (x_i, p_j); negative levels dashed."""
    x = np.asarray(x, float)
    p = np.asarray(p, float)
    z = np.asarray(values, float)
    parts, sx, sy = _frame(title, xlabel, ylabel, (x[0], x[-1]), (p[0], p[-1]))
    zmin, zmax = float(z.min()), float(z.max())
    lv = np.linspace(zmin, zmax, levels + 2)[1:-1]
    gen = contourpy.contour_generator(x=p, y=x, z=z)  # z indexed [x, p]: rows follow x
    for level in lv:
        color = "#c0392b" if level < 0 else "#1f4e99"
        dash = ' stroke-dasharray="4,3"' if level < 0 else ""
        for seg in gen.lines(level):
            if len(seg) < 2:
                continue
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx(seg[:, 1]), sy(seg[:, 0])))
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1"{dash} points="{pts}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
