"""Degenerate and integrable models.

The segment table (an oval squashed to a segment), the family of confocal
ellipses with foci ``(+-1, 0)``, the two-point Poncelet map on a circle,
and invariant measures on confocal ellipses.

Points on an ellipse with semi-axes ``A, B`` are addressed by the eccentric
anomaly ``theta``: ``(A cos theta, B sin theta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cosh, exp, pi, sinh

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .errors import NonPositiveT, OffCurve, OnAxis
from .geometry import Oval

TWO_PI = 2.0 * pi


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class SegmentTable:
    """A segment ``[A, B]`` treated as a degenerate table."""

    A: tuple
    B: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=float))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=float))
        if self.half_length <= 0.0:
            raise ValueError("segment endpoints must differ")

    @classmethod
    def centered(cls, a=1.0):
        return cls((-a, 0.0), (a, 0.0))

    @property
    def half_length(self):
        return 0.5 * float(np.linalg.norm(self.B - self.A))

    @property
    def midpoint(self):
        return 0.5 * (self.A + self.B)

    def focal_sum(self, C):
        C = np.asarray(C, dtype=float)
        return np.linalg.norm(C - self.A, axis=-1) + np.linalg.norm(C - self.B, axis=-1)

    def positive_endpoint(self, C):
        """The endpoint ``x'`` with ``cross(x' - C, x - C) > 0``; the same
        orientation rule as the positive tangency point of an oval."""
        C = np.asarray(C, dtype=float)
        c = _cross(self.A - C, self.B - C)
        scale = self.half_length * max(np.linalg.norm(C - self.midpoint), self.half_length)
        if abs(c) <= 1e-14 * scale:
            raise OnAxis(f"point {tuple(float(v) for v in C)} is on the segment's line")
        return (self.A, self.B) if c > 0 else (self.B, self.A)

    def eccentric_anomaly(self, C):
        # angle on the confocal ellipse through C, in the segment's frame
        C = np.asarray(C, dtype=float)
        e = (self.B - self.A) / (2 * self.half_length)
        rel = C - self.midpoint
        u, v = rel @ e, _cross(e, rel)
        s = float(self.focal_sum(C)) / 2
        return float(np.arctan2(v / np.sqrt(s * s - self.half_length**2), u / s))


def segment_step(seg, C):
    """Image of ``C`` under the segment map.

    The image lies on the line from ``C`` through the positive endpoint,
    beyond it, on the ellipse with foci ``A``, ``B`` through ``C``.

    Raises
    ------
    OnAxis
        If ``C`` is on the line through the segment.
    """
    C = np.asarray(C, dtype=float)
    xp, x = seg.positive_endpoint(C)
    S = float(seg.focal_sum(C))
    u = xp - C
    u = u / np.linalg.norm(u)
    d = xp - x
    s = (S * S - d @ d) / (2.0 * (S + d @ u))
    return xp + s * u


def segment_step_angle(seg, C):
    """Signed eccentric-anomaly increment of one segment step, in ``(-pi, pi]``."""
    t0 = seg.eccentric_anomaly(C)
    t1 = seg.eccentric_anomaly(segment_step(seg, C))
    return float(-((t0 - t1 + pi) % TWO_PI - pi))


def segment_outer_area_step(seg, x):
    """Outer (area) billiard about a segment: reflect ``x`` in the positive
    endpoint."""
    x = np.asarray(x, dtype=float)
    return 2.0 * seg.positive_endpoint(x)[0] - x


@dataclass(frozen=True)
class ConfocalFamily:
    """Ellipses ``E_t`` with semi-axes ``(cosh t, sinh t)`` and foci ``(+-1, 0)``,
    compared with the circles ``C_t`` of radius ``e^t / 2``."""

    def circle_radius(self, t):
        return exp(t) / 2.0

    def semi_axes(self, t):
        if t <= 0:
            raise NonPositiveT(f"t must be positive, got {t}")
        return cosh(t), sinh(t)


def confocal_ellipse(fam, t):
    return Oval.ellipse(*fam.semi_axes(t))


def radial_deviation(t, n=8192):
    """``max |(cosh t cos a, sinh t sin a)| - e^t/2`` over ``n`` samples.

    Uses ``|E|^2 - (e^t/2)^2 = cos^2 a + e^{-2t}/4 - 1/2`` to avoid
    cancellation at large ``t``.
    """
    a = np.arange(n) * (TWO_PI / n)
    c2 = np.cos(a) ** 2
    dev = np.abs(c2 + exp(-2 * t) / 4 - 0.5) / (np.sqrt(sinh(t) ** 2 + c2) + exp(t) / 2)
    return float(dev.max())


def hausdorff_to_circle(fam, t, n=8192):
    """Hausdorff distance between the curves ``E_t`` and ``C_t``.

    Ellipse-to-circle distances are radial and exact; circle-to-ellipse
    distances come from a nearest-neighbour query on ``n`` ellipse samples,
    refined by 1-D minimization around the worst candidates.
    """
    A, B = fam.semi_axes(t)
    R = fam.circle_radius(t)
    one_way = radial_deviation(t, n)

    th = np.arange(n) * (TWO_PI / n)
    ell = np.column_stack([A * np.cos(th), B * np.sin(th)])
    circ = R * np.column_stack([np.cos(th), np.sin(th)])
    dist, idx = cKDTree(ell).query(circ)
    h = TWO_PI / n
    other = 0.0
    for j in np.argsort(dist)[-8:]:
        P = circ[j]
        res = minimize_scalar(
            lambda s: np.hypot(A * np.cos(s) - P[0], B * np.sin(s) - P[1]),
            bounds=(th[idx[j]] - h, th[idx[j]] + h),
            method="bounded",
            options={"xatol": 1e-14},
        )
        other = max(other, min(float(res.fun), float(dist[j])))
    return max(one_way, other)


def poncelet_step(r, pt, endpoint):
    """Second intersection with the circle ``|x| = r`` of the line through
    ``pt`` and the endpoint ``(-1, 0)`` (``"left"``) or ``(1, 0)`` (``"right"``)."""
    if r <= 1.0:
        raise ValueError("the circle must enclose the endpoints (r > 1)")
    e = np.array([-1.0, 0.0]) if endpoint == "left" else np.array([1.0, 0.0])
    P = np.asarray(pt, dtype=float)
    d = e - P
    s = -2.0 * (P @ d) / (d @ d)
    return P + s * d


def poncelet_map(r, pt):
    """One step of the alternating map, endpoint chosen by the segment rule."""
    seg = SegmentTable.centered(1.0)
    try:
        xp, _ = seg.positive_endpoint(pt)
    except OnAxis:
        # both endpoints lie on the chord; the image is the antipode
        return poncelet_step(r, pt, "left")
    return poncelet_step(r, pt, "left" if xp[0] < 0 else "right")


def poncelet_double_angle(r, alpha):
    """Signed central angle swept by two steps of :func:`poncelet_map`."""
    P = r * np.array([np.cos(alpha), np.sin(alpha)])
    Q = poncelet_map(r, poncelet_map(r, P))
    return float(np.arctan2(_cross(P, Q), P @ Q))


def _on_outer(a, b, lam, x, y, tol=1e-8):
    res = x * x / (a * a + lam) + y * y / (b * b + lam) - 1.0
    if abs(res) > tol:
        raise OffCurve(f"point ({x}, {y}) is off the outer ellipse (residual {res:.3g})")


def measure_density(a, b, lam, pt):
    """Density ``1/G`` of the invariant measure per unit arc length on the
    outer ellipse ``x^2/(a^2+lam) + y^2/(b^2+lam) = 1`` around the table
    ``x^2/a^2 + y^2/b^2 = 1``."""
    if lam <= 0:
        raise ValueError("confocal parameter must be positive")
    x, y = float(pt[0]), float(pt[1])
    _on_outer(a, b, lam, x, y)
    g2 = (x * x / (a * a + lam) ** 2 + y * y / (b * b + lam) ** 2) * (
        x * x / (a * a) + y * y / (b * b) - 1.0
    )
    return 1.0 / np.sqrt(g2)


def limit_density(a, b, theta):
    """Rescaled invariant density ``2 / w`` in the large-orbit limit."""
    return 1.0 / np.sqrt(b * b * np.cos(theta) ** 2 + a * a * np.sin(theta) ** 2)


def segment_density(a, theta):
    return 1.0 / (a * np.abs(np.sin(theta)))


def _arc_speed(A, B, th):
    return np.sqrt(A * A * np.sin(th) ** 2 + B * B * np.cos(th) ** 2)


def mu_length(a, b, lam, th1, th2, kind="ellipse"):
    """Measure of the arc ``[th1, th2]`` (eccentric anomaly) of the outer
    ellipse.

    ``kind`` is ``"ellipse"`` (``ds / G``), ``"limit"`` (``2 d theta / w``)
    or ``"segment"`` (``d theta / (a |sin theta|)``, needs ``b = 0``).
    """
    A, B = np.sqrt(a * a + lam), np.sqrt(b * b + lam)
    if kind == "ellipse":
        def f(t):
            pt = (A * np.cos(t), B * np.sin(t))
            return measure_density(a, b, lam, pt) * _arc_speed(A, B, t)
    elif kind == "limit":
        def f(t):
            return limit_density(a, b, t)
    elif kind == "segment":
        def f(t):
            return segment_density(a, t)
    else:
        raise ValueError(f"unknown measure {kind!r}")
    return quad(f, th1, th2, epsabs=1e-13, epsrel=1e-12, limit=200)[0]


def confocal_residual(oval, A):
    """``|focal sum of F(A) - focal sum of A|`` for an elliptic (or circular)
    table centred at the plane origin."""
    from .olbmap import step

    A = np.asarray(A, dtype=float)
    f1, f2 = foci(oval)
    img = step(oval, A).image
    fs = lambda P: np.linalg.norm(P - f1) + np.linalg.norm(P - f2)  # noqa: E731
    return abs(fs(img) - fs(A))


def foci(oval):
    if oval.kind == "circle":
        return np.zeros(2), np.zeros(2)
    if oval.kind != "ellipse":
        raise ValueError("foci are defined for ellipse and circle tables")
    a, b = oval.params["a"], oval.params["b"]
    c = np.sqrt(abs(a * a - b * b))
    e = np.array([c, 0.0]) if a >= b else np.array([0.0, c])
    return e, -e
