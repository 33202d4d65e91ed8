"""CSV and SVG writers.

Floats are written with ``%.17g`` (locale independent, round-trip exact).
Files are written atomically through a temporary file in the target
directory.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np

from .curve import as_level

SVG_VIEWBOX = (-0.05, -0.05, 1.1, 1.0)
# screen y grows downwards: y_screen = SVG_FLIP - y
SVG_FLIP = 0.9


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def vertices_csv(level) -> str:
    level = as_level(level)
    s = level.arc_coordinates
    rows = ((i + 1, x, y, s[i]) for i, (x, y) in enumerate(level.vertices))
    return csv_text(("chain_index", "x", "y", "arc_coordinate"), rows)


def ramp_color(t: float) -> str:
    """Diverging ramp: -1 -> blue (#0000ff), 0 -> white, +1 -> red (#ff0000)."""
    t = min(1.0, max(-1.0, float(t)))
    if t >= 0:
        g = round(255 * (1 - t))
        return f"#ff{g:02x}{g:02x}"
    g = round(255 * (1 + t))
    return f"#{g:02x}{g:02x}ff"


def svg_text(level, overlay=None, stroke_width: float = 0.004) -> str:
    """Polyline through the chain; optional per-vertex colour overlay.

    Overlay values are scaled by their largest magnitude, so the colour of a
    vertex is ``ramp_color(value / max|value|)``; an all-zero overlay is white.
    """
    level = as_level(level)
    pts = level.vertices
    coords = " ".join(f"{fmt(x)},{fmt(SVG_FLIP - y)}" for x, y in pts)
    vb = " ".join(fmt(v) for v in SVG_VIEWBOX)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}" width="1100" height="1000">',
        f'<title>arrowhead graph, level {level.level}</title>',
        f'<polyline fill="none" stroke="black" stroke-width="{fmt(stroke_width)}" '
        f'stroke-linejoin="round" points="{coords}"/>',
    ]
    if overlay is not None:
        vals = np.asarray(overlay, dtype=float)
        if vals.shape != (pts.shape[0],):
            raise ValueError(f"overlay has {vals.size} values, level has {pts.shape[0]} vertices")
        peak = float(np.max(np.abs(vals)))
        r = fmt(min(0.02, 0.35 * 2.0**-level.level))
        lines.append(f'<g stroke="black" stroke-width="{fmt(stroke_width / 4)}">')
        for (x, y), v in zip(pts, vals):
            color = ramp_color(v / peak if peak > 0 else 0.0)
            lines.append(f'<circle cx="{fmt(x)}" cy="{fmt(SVG_FLIP - y)}" r="{r}" fill="{color}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(level, path, overlay=None) -> None:
    write_atomic(path, svg_text(level, overlay))
