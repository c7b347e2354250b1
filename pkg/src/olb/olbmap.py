"""The outer length billiard map.

For an exterior point ``A`` with negative/positive tangency points ``x``,
``x'``, draw the circle tangent to the table at ``x'`` and to the line
``Ax``.  Its other common tangent with the table (touching at ``q``) meets
the line ``Ax'`` at the image ``F(A)``.

Apexes are handled in *tangency coordinates*: the pair ``(a1, a2)`` of
normal angles at ``x`` and ``x'``.  In those coordinates ``F`` is the shift
``(a1, a2) -> (a2, b)`` with ``b`` the normal angle at ``q``, which is how
:func:`orbit` runs without recomputing tangent fans.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, tan

import numpy as np
from scipy.optimize import brentq

from . import kernel
from .errors import (
    BranchAmbiguity,
    NoCircle,
    NoRoot,
    OLBError,
    OrbitError,
    ParallelTangents,
    PointInsideCurve,
)
from .geometry import CurvePoint, TangentFan, normal, point_at, tangent_fan

TWO_PI = 2.0 * pi
NEAR_BOUNDARY = 1e-6  # relative to the diameter
EXCLUDE = 1e-8  # angular exclusion around the x' tangent and the line Ax


@dataclass(frozen=True)
class AuxCircle:
    center: np.ndarray
    radius: float
    tangency: CurvePoint


@dataclass(frozen=True)
class MapStep:
    A: np.ndarray
    fan: TangentFan
    circle: AuxCircle
    exit: CurvePoint
    image: np.ndarray


@dataclass(frozen=True)
class GeneratingEval:
    """Generating function and its arc-length derivatives at a pair."""

    value: float
    d1: float
    d2: float
    d12: float


def _check_exterior(oval, A):
    fan = tangent_fan(oval, A)
    gap = oval.exterior_gap(A)
    if gap < NEAR_BOUNDARY * oval.diameter:
        raise PointInsideCurve(f"apex {tuple(float(v) for v in A)} is within {gap:.3g} of the table")
    return fan


def _circle_from_fan(fan):
    a1, a2 = fan.angles
    rho = fan.len_pos * tan(0.5 * (a2 - a1))
    if not (np.isfinite(rho) and rho > 0.0):
        raise NoCircle(f"no auxiliary circle on the right of the ray (radius {rho})")
    center = fan.pos.position + rho * normal(a2)
    return AuxCircle(center=center, radius=float(rho), tangency=fan.pos)


def aux_circle(oval, A):
    """Circle tangent to the table at ``x'`` and to the line ``Ax``.

    Its center sits on the outward normal at ``x'``, which is the right-hand
    side of the ray from ``A`` through ``x'``.
    """
    A = np.asarray(A, dtype=float)
    return _circle_from_fan(tangent_fan(oval, A))


def _exit_residual(oval, circle, beta):
    """Distance from the circle's center to the support line at ``beta``
    minus the radius, rearranged as ``p(beta) - x'.n(beta) - 2 rho
    cos^2((beta - a2)/2)`` to avoid cancelling terms of size ``|center|``."""
    x2 = circle.tangency.position
    half = 0.5 * (beta - circle.tangency.alpha)
    return oval.support(beta)[0] - normal(beta) @ x2 - 2.0 * circle.radius * np.cos(half) ** 2


def _exit_angle(oval, fan, circle, scan=256):
    a1, a2 = fan.angles
    lo, hi = a2 + EXCLUDE, a1 + TWO_PI - EXCLUDE
    grid = np.linspace(lo, hi, scan)
    h = _exit_residual(oval, circle, grid)
    flips = np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)[0]
    if len(flips) == 0:
        raise NoRoot("no common tangent of the table and the auxiliary circle")
    if len(flips) > 1:
        raise BranchAmbiguity(f"{len(flips)} admissible exit tangents")
    i = flips[0]
    return brentq(
        lambda b: float(_exit_residual(oval, circle, b)),
        grid[i],
        grid[i + 1],
        xtol=1e-15,
        rtol=8.9e-16,
    )


def step(oval, A):
    """One application of the map, with the full construction attached."""
    A = np.asarray(A, dtype=float)
    fan = _check_exterior(oval, A)
    circle = _circle_from_fan(fan)
    beta = _exit_angle(oval, fan, circle)
    a2 = fan.angles[1]
    x, y, _, _ = kernel.apex(oval.code, oval.kparams, a2, beta)
    return MapStep(A=A, fan=fan, circle=circle, exit=point_at(oval, beta), image=np.array([x, y]))


def step_variational(oval, ax, ax2):
    """Next tangency angle from the generating relation ``d2(ax, ax2) +
    d1(ax2, next) = 0``."""
    if not 0.0 < ax2 - ax < pi:
        raise NoRoot("tangent lines do not meet at an exterior apex")
    try:
        return kernel.variational_angle(oval.code, oval.kparams, float(ax), float(ax2))
    except (ArithmeticError, ValueError) as exc:
        raise NoRoot(str(exc)) from None


def generating(oval, ax, ax2):
    """``H = |xA| + |Ax'|`` with derivatives per arc length.

    Raises
    ------
    ParallelTangents
        If the tangent lines at ``ax`` and ``ax2`` do not meet at an apex
        with angle in ``(0, pi)``.
    """
    d = ax2 - ax
    if not 0.0 < d < pi:
        raise ParallelTangents(f"tangency gap {d} outside (0, pi)")
    _, _, len1, len2 = kernel.apex(oval.code, oval.kparams, ax, ax2)
    # derivatives are infinite where the radius of curvature vanishes
    with np.errstate(divide="ignore", invalid="ignore"):
        k1 = 1.0 / oval.radius_of_curvature(ax)
        k2 = 1.0 / oval.radius_of_curvature(ax2)
    cot_half = tan(0.5 * d)  # cot(phi/2), phi = pi - d
    sin_half_sq = cos(0.5 * d) ** 2
    return GeneratingEval(
        value=len1 + len2,
        d1=float(-k1 * len1 * cot_half - 1.0),
        d2=float(k2 * len2 * cot_half + 1.0),
        d12=float(-k1 * k2 * (len1 + len2) / (2.0 * sin_half_sq)),
    )


def area_form_factor(oval, A):
    """Density ``C_A`` of the invariant area form relative to ``dx dy``."""
    fan = tangent_fan(oval, np.asarray(A, dtype=float))
    return 1.0 / tan(0.5 * fan.phi) * (1.0 / fan.len_neg + 1.0 / fan.len_pos)


def jacobian(oval, A, h):
    A = np.asarray(A, dtype=float)
    J = np.empty((2, 2))
    for j, e in enumerate(np.eye(2)):
        J[:, j] = (step(oval, A + h * e).image - step(oval, A - h * e).image) / (2 * h)
    return J


def form_invariance_residual(oval, A, h=1e-5):
    """``|C_F(A) det DF(A) / C_A - 1|`` with a central-difference Jacobian."""
    A = np.asarray(A, dtype=float)
    image = step(oval, A).image
    det = np.linalg.det(jacobian(oval, A, h))
    return abs(area_form_factor(oval, image) * det / area_form_factor(oval, A) - 1.0)


def commute_gap(oval1, oval2, A):
    A = np.asarray(A, dtype=float)
    a = step(oval1, step(oval2, A).image).image
    b = step(oval2, step(oval1, A).image).image
    return float(np.linalg.norm(a - b))


def tangency_pairs(oval, A0, n):
    """Tangency coordinates of ``A0`` and its first ``n`` images.

    Raises
    ------
    OrbitError
        Carrying the index of the first image that could not be computed.
    """
    try:
        fan = _check_exterior(oval, np.asarray(A0, dtype=float))
    except OLBError as exc:
        raise OrbitError(1, exc) from exc
    pairs = kernel.iterate(oval.code, oval.kparams, *fan.angles, int(n))
    gaps = pairs[:, 1] - pairs[:, 0]
    bad = np.nonzero(~(np.isfinite(gaps) & (gaps > 0.0) & (gaps < pi)))[0]
    if len(bad):
        i = int(bad[0])
        raise OrbitError(i, NoRoot(f"exit tangent lost (gap {gaps[i]})"))
    return pairs


def orbit(oval, A0, n, stride=1):
    """``A0`` followed by ``n`` iterates of ``F`` (stride 1) or ``F∘F``
    (stride 2), as an ``(n + 1, 2)`` array."""
    if stride not in (1, 2):
        raise ValueError("stride must be 1 or 2")
    pairs = tangency_pairs(oval, A0, n * stride)
    pts = kernel.apexes(oval.code, oval.kparams, pairs[::stride])
    pts[0] = A0
    return pts


def generating_residuals(oval, pairs):
    """``d2(a_i, a_i+1) + d1(a_i+1, a_i+2)`` along consecutive tangency angles."""
    out = np.empty(len(pairs) - 1)
    for i in range(len(pairs) - 1):
        a1, a2 = pairs[i]
        b = pairs[i + 1][1] + (a2 - pairs[i + 1][0])
        out[i] = generating(oval, a1, a2).d2 + generating(oval, a2, b).d1
    return out

