"""CSV, JSON and SVG artifacts.

Floats are written with 17 significant digits so reruns are byte-identical
and values round-trip exactly.
"""

from __future__ import annotations

import json

import numpy as np

from . import kernel
from .centers import ham_level
from .errors import EmptyInput
from .olbmap import generating_residuals, tangency_pairs

ORBIT_COLUMNS = ("step", "x", "y", "r", "alpha", "focal_or_level", "residual")
CENTER_COLUMNS = ("step", "cx", "cy", "beta", "R", "r", "ham_level", "rescaled_x", "rescaled_y")


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _csv(columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _focal_or_level(oval, pts):
    """Focal sum for ellipse and circle tables, else the distance to the
    origin (constant along the limiting flow)."""
    if oval.kind in ("ellipse", "circle"):
        from .degenerate import foci

        f1, f2 = foci(oval)
        return np.linalg.norm(pts - f1, axis=1) + np.linalg.norm(pts - f2, axis=1)
    return np.hypot(*(pts - np.asarray(oval.origin)).T)


def orbit_rows(oval, A0, n, stride=1):
    """Rows of the orbit CSV for ``A0`` and ``n`` iterates.

    ``residual`` is the generating relation ``d2 + d1`` at the positive
    tangency of each row's point.
    """
    pairs = tangency_pairs(oval, A0, n * stride + 1)
    pts = kernel.apexes(oval.code, oval.kparams, pairs[: n * stride + 1 : stride])
    pts[0] = A0
    d = pts - np.asarray(oval.origin)
    level = _focal_or_level(oval, pts)
    res = generating_residuals(oval, pairs)[::stride]
    return [
        (j, pts[j, 0], pts[j, 1], np.hypot(*d[j]), np.arctan2(d[j, 1], d[j, 0]), level[j], res[j])
        for j in range(n + 1)
    ]


def orbit_csv(oval, A0, n, stride=1):
    return _csv(ORBIT_COLUMNS, orbit_rows(oval, A0, n, stride))


def center_rows(oval, trace):
    H = ham_level(oval, np.asarray(oval.origin) + trace.rescaled)
    return [
        (
            int(trace.steps[j]),
            trace.centers[j, 0],
            trace.centers[j, 1],
            trace.beta[j],
            trace.R[j],
            trace.r[j],
            H[j],
            trace.rescaled[j, 0],
            trace.rescaled[j, 1],
        )
        for j in range(len(trace))
    ]


def centers_csv(oval, trace):
    return _csv(CENTER_COLUMNS, center_rows(oval, trace))


def to_json(obj):
    """Deterministic JSON: sorted keys, numpy scalars and arrays converted."""

    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    return json.dumps(obj, default=default, sort_keys=True, indent=2) + "\n"


def periodic_json(orbit):
    return to_json(orbit.as_dict())


def render_svg(points, style=None, table=None, size=600):
    """Standalone SVG of a polyline through ``points``.

    ``table`` (an :class:`~olb.geometry.Oval`) adds its outline.  The
    viewBox is the data extent plus a 5% margin; the y axis points up.

    Raises
    ------
    EmptyInput
        If ``points`` is empty.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise EmptyInput("no points to draw")
    style = {"stroke": "#1f4e79", "stroke_width": 1.0, "markers": False, **(style or {})}
    outline = table.boundary(256) if table is not None else np.empty((0, 2))
    everything = np.vstack([pts, outline])
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    m = 0.05 * span
    x0, y0 = lo - m
    w, h = span + 2 * m

    # flip y so the picture has the usual orientation
    def path(p):
        return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in p)

    sw = style["stroke_width"] * max(w, h) / size
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{int(round(size * h / w))}" '
        f'viewBox="{_fmt(x0)} {_fmt(-(y0 + h))} {_fmt(w)} {_fmt(h)}">',
    ]
    if len(outline):
        out.append(f'<polygon points="{path(outline)}" fill="#dddddd" stroke="black" stroke-width="{_fmt(sw)}"/>')
    out.append(
        f'<polyline points="{path(pts)}" fill="none" stroke="{style["stroke"]}" stroke-width="{_fmt(sw)}"/>'
    )
    if style["markers"]:
        r = 2.0 * sw
        out += [f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(r)}" fill="{style["stroke"]}"/>' for x, y in pts]
    out.append("</svg>")
    return "\n".join(out) + "\n"

