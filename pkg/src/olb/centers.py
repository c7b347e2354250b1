"""Auxiliary-circle centers far from the table.

For a source point at polar coordinates ``(r, alpha)`` the center of its
auxiliary circle sits at distance ``R ~ 2 r^2 / w(alpha)`` in direction
``beta ~ alpha + pi/2``.  Dividing by ``r^2`` the centers collected along an
orbit trace the level set ``{ham_level = 2}`` of ``r w(alpha + pi/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from scipy.spatial import cKDTree

from . import kernel
from .errors import AtOrigin, NotPeriodic, TooShort
from .geometry import normal
from .olbmap import aux_circle, tangency_pairs

TWO_PI = 2.0 * pi


def circle_center(oval, x):
    """Center of the auxiliary circle of the exterior point ``x``."""
    return aux_circle(oval, x).center


def _centers_from_pairs(oval, pairs):
    a1, a2 = pairs[:, 0], pairs[:, 1]
    rho = np.array([kernel.apex(oval.code, oval.kparams, u, v)[3] for u, v in pairs])
    rho = rho * np.tan(0.5 * (a2 - a1))
    return oval.point(a2) + rho[:, None] * normal(a2)


@dataclass(frozen=True)
class CenterTrace:
    """Centers recorded along an orbit, in polar form about the origin.

    ``points`` and ``r``/``alpha`` describe the source points, ``centers``
    and ``beta``/``R`` their auxiliary-circle centers; ``rescaled`` is
    ``(center - origin) / r^2``.
    """

    origin: np.ndarray
    points: np.ndarray
    r: np.ndarray
    alpha: np.ndarray
    centers: np.ndarray
    beta: np.ndarray
    R: np.ndarray
    rescaled: np.ndarray
    steps: np.ndarray

    def __len__(self):
        return len(self.r)


def rescaled_center_orbit(oval, x0, n, odd=False):
    """Centers of every other auxiliary circle along the orbit of ``x0``.

    Records the even steps ``0, 2, ..., 2n`` of the orbit (the odd steps
    ``1, 3, ..., 2n + 1`` with ``odd=True``).

    Raises
    ------
    ValueError
        If ``x0`` is closer than ten diameters to the origin.
    OrbitError
        If the orbit breaks down.
    """
    origin = np.asarray(oval.origin, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if np.linalg.norm(x0 - origin) < 10.0 * oval.diameter:
        raise ValueError("start point must be at least ten diameters from the origin")
    pairs = tangency_pairs(oval, x0, 2 * n + int(odd))
    steps = np.arange(int(odd), 2 * n + 1 + int(odd), 2)
    sel = pairs[steps]
    pts = kernel.apexes(oval.code, oval.kparams, sel)
    if not odd:
        pts[0] = x0
    centers = _centers_from_pairs(oval, sel)
    d = pts - origin
    c = centers - origin
    r = np.hypot(d[:, 0], d[:, 1])
    R = np.hypot(c[:, 0], c[:, 1])
    return CenterTrace(
        origin=origin,
        points=pts,
        r=r,
        alpha=np.arctan2(d[:, 1], d[:, 0]),
        centers=centers,
        beta=np.arctan2(c[:, 1], c[:, 0]),
        R=R,
        rescaled=c / (r * r)[:, None],
        steps=steps,
    )


def ham_level(oval, pt):
    """``r w(alpha + pi/2)`` in polar coordinates of ``pt`` about the origin.

    Accepts a single point or an ``(n, 2)`` array.
    """
    d = np.asarray(pt, dtype=float) - np.asarray(oval.origin, dtype=float)
    r = np.hypot(d[..., 0], d[..., 1])
    if np.any(r == 0.0):
        raise AtOrigin("ham_level is undefined at the origin")
    a = np.arctan2(d[..., 1], d[..., 0])
    return r * oval.width(a + pi / 2)


def level_curve(oval, level, n=4096):
    """Points of ``{ham_level = level}``, as an ``(n, 2)`` array."""
    t = np.arange(n) * (TWO_PI / n)
    return np.asarray(oval.origin) + (level / oval.width(t + pi / 2))[:, None] * normal(t)


def hausdorff(P, Q):
    """Symmetric Hausdorff distance between two point clouds."""
    return max(cKDTree(Q).query(P)[0].max(), cKDTree(P).query(Q)[0].max())


def level_deviation(oval, points, level=2.0, n=8192):
    """Hausdorff distance from ``points`` (relative to the origin) to the
    level curve, divided by the curve's largest radius."""
    curve = level_curve(oval, level, n) - np.asarray(oval.origin)
    scale = np.hypot(curve[:, 0], curve[:, 1]).max()
    return float(hausdorff(np.asarray(points), curve) / scale)


def _unwrapped_delta(a):
    return (np.diff(a) + pi) % TWO_PI - pi


def sectorial_rate(oval, trace):
    """Per-step ``(1/2) R^2 |d beta| / 2`` with the reference ``2 r^3 / w(alpha)``.

    The division by two converts one double step into unit time of the
    limiting motion.  Returns ``(rate, reference)`` arrays of length
    ``len(trace) - 1``.

    Raises
    ------
    TooShort
        If the trace has fewer than two records.
    """
    if len(trace) < 2:
        raise TooShort("need at least two centers")
    dbeta = np.abs(_unwrapped_delta(trace.beta))
    rate = 0.25 * trace.R[:-1] ** 2 * dbeta
    ref = 2.0 * trace.r[:-1] ** 3 / oval.width(trace.alpha[:-1])
    return rate, ref


def kepler_rates(points, origin=(0.0, 0.0)):
    """``(1/2) rho^2 |d theta|`` between consecutive points."""
    d = np.asarray(points, dtype=float) - np.asarray(origin, dtype=float)
    if len(d) < 2:
        raise TooShort("need at least two points")
    rho = np.hypot(d[:, 0], d[:, 1])
    th = np.arctan2(d[:, 1], d[:, 0])
    return 0.5 * rho[:-1] ** 2 * np.abs(_unwrapped_delta(th))


def ellipse_center_locus(oval, orbit, tol=1e-7):
    """Max residual of the orbit's auxiliary-circle centers on the ellipse
    polar to the table with respect to the confocal ellipse through the
    vertices.

    With table semi-axes ``a, b`` and vertex ellipse ``A, B``, the locus is
    ``a^2 u^2 / A^4 + b^2 v^2 / B^4 = 1``.

    Raises
    ------
    NotPeriodic
        If the orbit does not close under the geometric map to ``tol``
        (relative to the diameter).
    """
    from .periodic import verify_periodic

    if oval.kind == "circle":
        a = b = oval.params["r"]
    elif oval.kind == "ellipse":
        a, b = oval.params["a"], oval.params["b"]
    else:
        raise ValueError("ellipse_center_locus needs an ellipse or circle table")
    if verify_periodic(oval, orbit) > tol * oval.diameter:
        raise NotPeriodic("orbit does not close under the map")
    v = orbit.vertices
    c = np.sqrt(abs(a * a - b * b))
    f = np.array([c, 0.0]) if a >= b else np.array([0.0, c])
    half_sum = 0.5 * np.mean(np.linalg.norm(v - f, axis=1) + np.linalg.norm(v + f, axis=1))
    lam = half_sum**2 - max(a, b) ** 2
    A2, B2 = a * a + lam, b * b + lam
    ext = np.append(orbit.alphas, orbit.alphas[0] + TWO_PI * orbit.m)
    pairs = np.column_stack([ext[:-1], ext[1:]])
    u, w = _centers_from_pairs(oval, pairs).T
    return float(np.max(np.abs(a * a * u * u / A2**2 + b * b * w * w / B2**2 - 1.0)))
