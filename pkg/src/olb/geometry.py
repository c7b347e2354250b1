"""Strictly convex tables described by their support function.

A table (an *oval*) is stored through its support function ``p(alpha)``:
the distance from the plane origin ``(0, 0)`` to the support line with
outward normal ``(cos alpha, sin alpha)``.  Points, tangents, curvature,
widths and duals are all closed-form in ``p``, ``p'`` and ``p''``:

    gamma(alpha) = (p cos a - p' sin a, p sin a + p' cos a),
    radius of curvature = p + p''.

Each oval also carries a reference ``origin`` (an interior point) used by
everything that works in polar coordinates.  It defaults to the mean of the
boundary sampled at 1024 normal angles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import pi

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import kernel
from .errors import InvalidOval, OriginOutside, PointInsideCurve, TableSpecError

TWO_PI = 2.0 * pi

CODES = {"circle": 0, "ellipse": 1, "lp": 2, "fourier": 3}
_REQUIRED = {"circle": ("r",), "ellipse": ("a", "b"), "lp": ("p",), "fourier": ("c0",)}
_DEFAULTS = {"lp": {"scale": 1.0}}

# interior of the 1024-grid; the lp axes (where p + p'' = 0) fall between nodes
_CHECK_GRID = (np.arange(1024) + 0.5) * (TWO_PI / 1024)


def normal(alpha):
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)


def tangent(alpha):
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([-np.sin(alpha), np.cos(alpha)], axis=-1)


def _fourier_terms(params):
    a, b = {}, {}
    for key, val in params.items():
        m = re.fullmatch(r"([ab])(\d+)", key)
        if m:
            (a if m.group(1) == "a" else b)[int(m.group(2))] = val
        elif key != "c0":
            raise TableSpecError(f"unknown fourier coefficient {key!r}")
    return a, b


@dataclass(frozen=True)
class Oval:
    """A strictly convex closed curve given by its support function.

    Parameters
    ----------
    kind : {"circle", "ellipse", "lp", "fourier"}
    params : dict
        ``circle``: ``r``; ``ellipse``: ``a``, ``b`` (semi-axes along x, y);
        ``lp``: ``p`` in ``(1, 2]`` and ``scale`` (the ball
        ``|x|^p + |y|^p <= scale^p``); ``fourier``: ``c0`` plus any ``a<k>``,
        ``b<k>`` so that ``p = c0 + sum a_k cos k t + b_k sin k t``.
    origin : (2,) array_like, optional
        Interior reference point for polar coordinates.
    """

    kind: str
    params: dict = field(hash=False)
    origin: tuple = None

    def __post_init__(self):
        if self.kind not in CODES:
            raise TableSpecError(f"unknown table kind {self.kind!r}")
        params = dict(_DEFAULTS.get(self.kind, {}))
        params.update({k: float(v) for k, v in self.params.items()})
        for key in _REQUIRED[self.kind]:
            if key not in params:
                raise TableSpecError(f"{self.kind} table needs {key!r}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "code", CODES[self.kind])
        object.__setattr__(self, "kparams", self._kernel_params())
        self._validate()
        if self.origin is None:
            object.__setattr__(self, "origin", self._default_origin())
        else:
            object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
            if self.exterior_gap(self.origin) >= 0.0:
                raise OriginOutside(f"origin {self.origin} is not interior")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def circle(cls, r=1.0, origin=None):
        return cls("circle", {"r": r}, origin)

    @classmethod
    def ellipse(cls, a, b, origin=None):
        return cls("ellipse", {"a": a, "b": b}, origin)

    @classmethod
    def lp(cls, p, scale=1.0, origin=None):
        return cls("lp", {"p": p, "scale": scale}, origin)

    @classmethod
    def fourier(cls, c0, origin=None, **coeffs):
        return cls("fourier", {"c0": c0, **coeffs}, origin)

    def with_origin(self, origin):
        return Oval(self.kind, dict(self.params), origin)

    def _kernel_params(self):
        prm = self.params
        if self.kind == "circle":
            if prm["r"] <= 0:
                raise InvalidOval("circle radius must be positive")
            return np.array([prm["r"]])
        if self.kind == "ellipse":
            if prm["a"] <= 0 or prm["b"] <= 0:
                raise InvalidOval("ellipse semi-axes must be positive")
            return np.array([prm["a"], prm["b"]])
        if self.kind == "lp":
            p = prm["p"]
            if not 1.0 < p <= 2.0:
                raise InvalidOval("lp tables need 1 < p <= 2 (positive curvature)")
            if prm["scale"] <= 0:
                raise InvalidOval("lp scale must be positive")
            return np.array([p / (p - 1.0), prm["scale"]])
        a, b = _fourier_terms(prm)
        K = max([0, *a, *b])
        out = np.zeros(2 + 2 * K)
        out[0], out[1] = prm["c0"], K
        for k, v in a.items():
            out[1 + k] = v
        for k, v in b.items():
            out[1 + K + k] = v
        return out

    def _validate(self):
        p, _, p2 = self.support(_CHECK_GRID)
        if not np.all(np.isfinite(p + p2)):
            raise InvalidOval("support function is not twice differentiable")
        if np.min(p) <= 0.0:
            raise InvalidOval("the plane origin must lie inside the table (p > 0)")
        floor = 1e-8 if self.kind == "lp" else 0.0
        if np.min(p + p2) <= floor:
            raise InvalidOval("radius of curvature p + p'' is not positive")

    def _default_origin(self):
        if self.kind in ("circle", "ellipse", "lp"):
            return (0.0, 0.0)
        pts = self.point(np.arange(1024) * (TWO_PI / 1024))
        c = pts.mean(axis=0)
        return (float(c[0]), float(c[1]))

    # -- table-spec mini-language ---------------------------------------------

    @property
    def spec(self):
        """Canonical table-spec string; ``parse_table(o.spec) == o``."""
        keys = list(_REQUIRED[self.kind]) + sorted(
            k for k in self.params if k not in _REQUIRED[self.kind]
        )
        if self.kind == "fourier":
            keys = ["c0"] + sorted(
                (k for k in self.params if k != "c0"), key=lambda k: (int(k[1:]), k[0])
            )
        return self.kind + ":" + ",".join(f"{k}={self.params[k]!r}" for k in keys)

    def __eq__(self, other):
        return (
            isinstance(other, Oval)
            and self.kind == other.kind
            and self.params == other.params
            and self.origin == other.origin
        )

    def __hash__(self):
        return hash((self.spec, self.origin))

    def __repr__(self):
        return f"Oval({self.spec!r}, origin={self.origin})"

    # -- support-function geometry --------------------------------------------

    def support(self, alpha):
        """Return ``(p, p', p'')`` at the normal angle(s) ``alpha``."""
        t = np.asarray(alpha, dtype=float)
        prm = self.params
        if self.kind == "circle":
            r = np.full_like(t, prm["r"])
            return r, np.zeros_like(t), np.zeros_like(t)
        c, s = np.cos(t), np.sin(t)
        if self.kind == "ellipse":
            a, b = prm["a"], prm["b"]
            d = b * b - a * a
            q = a * a * c * c + b * b * s * s
            p = np.sqrt(q)
            q1 = 2 * d * s * c
            q2 = 2 * d * (c * c - s * s)
            return p, q1 / (2 * p), q2 / (2 * p) - q1 * q1 / (4 * p * q)
        if self.kind == "lp":
            qe, scale = self.kparams
            ac, as_ = np.abs(c), np.abs(s)
            S = ac**qe + as_**qe
            S1 = qe * (-(ac ** (qe - 1)) * np.sign(c) * s + as_ ** (qe - 1) * np.sign(s) * c)
            S2 = qe * ((qe - 1) * ac ** (qe - 2) * s * s - ac**qe
                       + (qe - 1) * as_ ** (qe - 2) * c * c - as_**qe)
            inv = 1.0 / qe
            h = S**inv
            h1 = inv * S ** (inv - 1) * S1
            h2 = inv * (inv - 1) * S ** (inv - 2) * S1 * S1 + inv * S ** (inv - 1) * S2
            return scale * h, scale * h1, scale * h2
        a, b = _fourier_terms(prm)
        p = np.full_like(t, prm["c0"])
        p1 = np.zeros_like(t)
        p2 = np.zeros_like(t)
        for k in sorted(set(a) | set(b)):
            ak, bk = a.get(k, 0.0), b.get(k, 0.0)
            ck, sk = np.cos(k * t), np.sin(k * t)
            p = p + ak * ck + bk * sk
            p1 = p1 + k * (bk * ck - ak * sk)
            p2 = p2 - k * k * (ak * ck + bk * sk)
        return p, p1, p2

    def support_about(self, alpha, center=None):
        """Support function measured from ``center`` (default: the origin)."""
        center = self.origin if center is None else center
        p = self.support(alpha)[0]
        return p - normal(alpha) @ np.asarray(center, dtype=float)

    def radius_of_curvature(self, alpha):
        p, _, p2 = self.support(alpha)
        return p + p2

    def point(self, alpha):
        """Boundary point(s) with outward normal angle ``alpha``."""
        p, p1, _ = self.support(alpha)
        return p[..., None] * normal(alpha) + p1[..., None] * tangent(alpha)

    def boundary(self, n=512):
        return self.point(np.arange(n) * (TWO_PI / n))

    def width(self, alpha):
        """Distance between the two support lines parallel to direction ``alpha``."""
        alpha = np.asarray(alpha, dtype=float)
        return self.support(alpha + pi / 2)[0] + self.support(alpha - pi / 2)[0]

    @cached_property
    def diameter(self):
        grid = np.arange(2048) * (pi / 2048)
        w = self.width(grid)
        i = int(np.argmax(w))
        h = pi / 2048
        res = minimize_scalar(
            lambda t: -float(self.width(t)),
            bounds=(grid[i] - h, grid[i] + h),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return max(float(w[i]), -float(res.fun))

    def exterior_gap(self, A):
        """``max_alpha (A . n(alpha) - p(alpha))``: the distance from ``A`` to
        the table when ``A`` is outside, negative when inside."""
        A = np.asarray(A, dtype=float)
        return _max_gap(self, A)[1]


@dataclass(frozen=True)
class CurvePoint:
    alpha: float
    position: np.ndarray
    tangent: np.ndarray
    curvature: float


@dataclass(frozen=True)
class TangentFan:
    """An exterior apex with its negative (``neg``) and positive (``pos``)
    tangency points."""

    apex: np.ndarray
    neg: CurvePoint
    pos: CurvePoint
    phi: float
    len_neg: float
    len_pos: float

    @property
    def angles(self):
        return self.neg.alpha, self.pos.alpha


@dataclass(frozen=True)
class RadialCurve:
    """A star-shaped curve ``alpha -> center + radius(alpha) (cos, sin)``."""

    radius_fn: object
    center: tuple = (0.0, 0.0)

    def radius(self, alpha):
        return self.radius_fn(np.asarray(alpha, dtype=float))

    def points(self, n=512):
        t = np.arange(n) * (TWO_PI / n)
        return np.asarray(self.center) + self.radius(t)[:, None] * normal(t)


def parse_table(spec, origin=None):
    """Parse ``kind:key=val,...`` (e.g. ``ellipse:a=2,b=1``) into an Oval."""
    m = re.fullmatch(r"\s*([a-z]+)\s*:(.*)", spec)
    if not m:
        raise TableSpecError(f"malformed table spec {spec!r}")
    kind, body = m.group(1), m.group(2)
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise TableSpecError(f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise TableSpecError(f"not a number: {val!r}") from None
    return Oval(kind, params, origin)


def point_at(oval, alpha):
    alpha = float(alpha)
    pos = oval.point(alpha)
    rc = float(oval.radius_of_curvature(alpha))
    return CurvePoint(alpha, pos, tangent(alpha), 1.0 / rc if rc > 0 else np.inf)


def width(oval, alpha):
    return oval.width(alpha)


def diameter(oval):
    return oval.diameter


def _gap_scalar(oval, A, t):
    return A[0] * np.cos(t) + A[1] * np.sin(t) - kernel.support(oval.code, oval.kparams, t)[0]


def _max_gap(oval, A):
    grid = np.arange(256) * (TWO_PI / 256)
    g = normal(grid) @ A - oval.support(grid)[0]
    i = int(np.argmax(g))
    h = TWO_PI / 256
    res = minimize_scalar(
        lambda t: -_gap_scalar(oval, A, t),
        bounds=(grid[i] - h, grid[i] + h),
        method="bounded",
        options={"xatol": 1e-13},
    )
    if -res.fun >= g[i]:
        return float(res.x), float(-res.fun)
    return float(grid[i]), float(g[i])


def tangent_fan(oval, A, min_gap=1e-9):
    """Tangent segments from the exterior point ``A``.

    The positive tangency point is the one the apex reaches along the
    counterclockwise orientation: ``(pos - A)`` is parallel to the curve's
    tangent there.

    Raises
    ------
    PointInsideCurve
        If ``A`` is inside the table or within ``min_gap`` of it.
    """
    A = np.asarray(A, dtype=float)
    peak, gap = _max_gap(oval, A)
    if gap <= min_gap:
        raise PointInsideCurve(f"point {tuple(float(v) for v in A)} is not outside the table (gap {gap:.3g})")

    def g(t):
        return _gap_scalar(oval, A, t)

    a1 = brentq(g, peak - pi, peak, xtol=1e-15, rtol=8.9e-16)
    a2 = brentq(g, peak, peak + pi, xtol=1e-15, rtol=8.9e-16)
    shift = TWO_PI * np.floor(a1 / TWO_PI)
    a1, a2 = a1 - shift, a2 - shift
    neg, pos = point_at(oval, a1), point_at(oval, a2)
    # orientation predicate: the apex lies ahead of neg and behind pos
    if not (np.dot(A - neg.position, neg.tangent) > 0 > np.dot(A - pos.position, pos.tangent)):
        raise PointInsideCurve("tangency orientation check failed")
    return TangentFan(
        apex=A,
        neg=neg,
        pos=pos,
        phi=pi - (a2 - a1),
        len_neg=float(np.linalg.norm(A - neg.position)),
        len_pos=float(np.linalg.norm(A - pos.position)),
    )


def central_symmetrization(oval):
    """The Minkowski sum of the table with its point reflection."""
    prm = oval.params
    if oval.kind == "circle":
        return Oval.circle(2 * prm["r"])
    if oval.kind == "ellipse":
        return Oval.ellipse(2 * prm["a"], 2 * prm["b"])
    if oval.kind == "lp":
        return Oval.lp(prm["p"], 2 * prm["scale"])
    a, b = _fourier_terms(prm)
    coeffs = {f"a{k}": 2 * v for k, v in a.items() if k % 2 == 0}
    coeffs.update({f"b{k}": 2 * v for k, v in b.items() if k % 2 == 0})
    return Oval.fourier(2 * prm["c0"], **coeffs)


def polar_dual(oval, mode="euclidean"):
    """Polar dual about the oval's origin, as a radial curve ``1 / p``.

    ``mode="symplectic"`` identifies covectors with vectors through the area
    form instead of the dot product, which rotates the curve by ``pi/2``.
    """
    grid = np.arange(1024) * (TWO_PI / 1024)
    if np.min(oval.support_about(grid)) <= 0.0:
        raise OriginOutside("the origin must be strictly inside the table")
    if mode == "euclidean":
        return RadialCurve(lambda t: 1.0 / oval.support_about(t))
    if mode == "symplectic":
        return RadialCurve(lambda t: 1.0 / oval.support_about(t - pi / 2))
    raise ValueError(f"unknown duality mode {mode!r}")


def dual_symmetrized(oval, mode="symplectic"):
    """Polar dual of the central symmetrization, about its center.

    The default symplectic dual has radial function ``1 / width(a)``; the
    Euclidean dual is the same curve rotated by ``pi/2``,
    ``1 / (p(a) + p(a + pi))``.
    """
    if mode == "symplectic":
        return RadialCurve(lambda t: 1.0 / oval.width(t))
    if mode == "euclidean":
        return RadialCurve(lambda t: 1.0 / oval.width(t + pi / 2))
    raise ValueError(f"unknown duality mode {mode!r}")
