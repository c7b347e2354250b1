"""Periodic orbits as circumscribed polygons of critical perimeter.

A ``k``-periodic orbit with rotation number ``m`` is a cyclic sequence of
tangency angles ``alpha_1 < ... < alpha_k < alpha_1 + 2 pi m`` with
consecutive gaps in ``(0, pi)``; its vertices are the apexes of consecutive
tangent lines.  The perimeter ``sum H(alpha_i, alpha_i+1)`` is critical
exactly when, at every tangency point, the two auxiliary circles through
that point (tangent to the incoming and to the outgoing side) have equal
radii.  We minimize by cyclic coordinate descent, solving that equality
for one angle at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi, tan

import numpy as np
from scipy.optimize import brentq, root

from . import kernel
from .errors import DegenerateConfig, NoConvergence, OLBError
from .olbmap import generating, step

TWO_PI = 2.0 * pi


@dataclass(frozen=True)
class PeriodicOrbit:
    k: int
    m: int
    alphas: np.ndarray
    vertices: np.ndarray
    perimeter: float
    residual: float
    sweeps: int = 0
    gradient: float = float("nan")

    def as_dict(self):
        return {
            "k": self.k,
            "m": self.m,
            "alphas": [float(a) for a in self.alphas],
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "perimeter": float(self.perimeter),
            # infinite where a tangency has zero radius of curvature
            "residual": float(self.residual) if np.isfinite(self.residual) else None,
        }


def _radius_in(code, prm, a_prev, a):
    # circle tangent at a to the side through the previous tangency
    _, _, _, len2 = kernel.apex(code, prm, a_prev, a)
    return len2 * tan(0.5 * (a - a_prev))


def _radius_out(code, prm, a, a_next):
    _, _, len1, _ = kernel.apex(code, prm, a, a_next)
    return len1 * tan(0.5 * (a_next - a))


def _relax(code, prm, a_prev, a_next, eps=1e-12):
    lo = max(a_prev, a_next - pi) + eps
    hi = min(a_next, a_prev + pi) - eps
    if not lo < hi:
        raise DegenerateConfig("neighbouring tangent lines no longer meet")

    def f(a):
        return _radius_in(code, prm, a_prev, a) - _radius_out(code, prm, a, a_next)

    return brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16)


def _cyclic(alphas, m):
    return np.append(alphas, alphas[0] + TWO_PI * m)


def _wrapped(alphas, m):
    return np.concatenate([[alphas[-1] - TWO_PI * m], alphas, [alphas[0] + TWO_PI * m]])


def generating_residual(oval, alphas, m):
    """Max over the polygon of ``|d2(a_i-1, a_i) + d1(a_i, a_i+1)|``.

    The derivatives are per arc length, so this is infinite where the
    radius of curvature vanishes at a tangency.
    """
    ext = _wrapped(alphas, m)
    res = 0.0
    for i in range(1, len(alphas) + 1):
        g = generating(oval, ext[i - 1], ext[i]).d2 + generating(oval, ext[i], ext[i + 1]).d1
        res = max(res, abs(g)) if np.isfinite(g) else float("inf")
    return res


def _gradient_vector(oval, alphas, m):
    code, prm = oval.code, oval.kparams
    ext = _wrapped(alphas, m)
    return np.array(
        [_radius_in(code, prm, ext[i - 1], ext[i]) - _radius_out(code, prm, ext[i], ext[i + 1]) for i in range(1, len(alphas) + 1)]
    )


def _polish(oval, alphas, m):
    """Solve the full gradient system from a nearby configuration.

    Returns the solution, or None if it leaves the admissible gap range.
    """
    try:
        sol = root(lambda a: _gradient_vector(oval, a, m), alphas, method="hybr", options={"xtol": 1e-15})
    except OLBError:
        return None
    gaps = np.diff(_cyclic(sol.x, m))
    if not np.all((gaps > 0) & (gaps < pi)):
        return None
    return sol.x


def perimeter_gradient(oval, alphas, m):
    """Max over the polygon of ``|d perimeter / d alpha_i|``.

    Equals ``|rho_in - rho_out|``, the radius of curvature times the
    arc-length residual, and stays finite at points of infinite curvature.
    """
    return float(np.max(np.abs(_gradient_vector(oval, alphas, m))))


def find_periodic(oval, k, m, tol=1e-10, max_sweeps=500, start=0.0, polish_after=30):
    """Perimeter-minimizing ``k``-gon with rotation number ``m``.

    Starts from the regular configuration ``alpha_i = start + 2 pi m i / k``.
    Coordinate sweeps converge slowly where the radius of curvature nearly
    vanishes, so after ``polish_after`` sweeps the full gradient system is
    solved once from the current configuration; if that fails the sweeps
    simply continue.

    Raises
    ------
    NoConvergence
        If the perimeter gradient in the angles is not below ``tol``
        within ``max_sweeps`` sweeps.
    DegenerateConfig
        If an update would push two consecutive tangent lines to parallel.
    """
    if k < 3 or not 1 <= m < k / 2:
        raise ValueError("need k >= 3 and 1 <= m < k/2")
    code, prm = oval.code, oval.kparams
    alphas = start + TWO_PI * m * np.arange(k) / k
    for sweep in range(1, max_sweeps + 1):
        for i in range(k):
            a_prev = alphas[i - 1] - (TWO_PI * m if i == 0 else 0.0)
            a_next = alphas[i + 1] if i + 1 < k else alphas[0] + TWO_PI * m
            alphas[i] = _relax(code, prm, a_prev, a_next)
        grad = perimeter_gradient(oval, alphas, m)
        if grad < tol:
            break
        if sweep == polish_after:
            polished = _polish(oval, alphas, m)
            if polished is not None and perimeter_gradient(oval, polished, m) < tol:
                alphas = polished
                grad = perimeter_gradient(oval, alphas, m)
                break
    else:
        raise NoConvergence(f"gradient {grad:.3g} after {max_sweeps} sweeps")
    return _build(oval, k, m, alphas, generating_residual(oval, alphas, m), sweep, grad)


def _build(oval, k, m, alphas, res, sweeps=0, grad=float("nan")):
    ext = _cyclic(alphas, m)
    verts = kernel.apexes(oval.code, oval.kparams, np.column_stack([ext[:-1], ext[1:]]))
    perimeter = sum(generating(oval, ext[i], ext[i + 1]).value for i in range(k))
    return PeriodicOrbit(k, m, alphas.copy(), verts, float(perimeter), float(res), sweeps, float(grad))


def verify_periodic(oval, orbit):
    """Max distance between the image of each vertex under the geometric
    map and the next vertex."""
    v = orbit.vertices
    return max(
        float(np.linalg.norm(step(oval, v[i]).image - v[(i + 1) % orbit.k])) for i in range(orbit.k)
    )


def jitter(orbit, oval, scale, rng):
    """The orbit with its tangency angles perturbed by ``scale`` (uniform)."""
    alphas = orbit.alphas + rng.uniform(-scale, scale, orbit.k)
    res = generating_residual(oval, alphas, orbit.m)
    return _build(oval, orbit.k, orbit.m, alphas, res, 0, perimeter_gradient(oval, alphas, orbit.m))


@dataclass(frozen=True)
class ScanCell:
    k: int
    m: int
    max_radius: float
    error: str = ""


def period_radius_scan(oval, k_max, primitive=False, executor=None):
    """For each ``3 <= k <= k_max``: the largest vertex distance from the
    origin over the orbits found for admissible ``m``.

    Failed ``(k, m)`` cells are recorded with their error and skipped.
    Returns ``(table, cells)`` with ``table[k]`` the maximum radius.
    """
    origin = np.asarray(oval.origin)
    jobs = [
        (k, m)
        for k in range(3, k_max + 1)
        for m in range(1, (k + 1) // 2)
        if not primitive or gcd(k, m) == 1
    ]

    def cell(job):
        k, m = job
        try:
            orb = find_periodic(oval, k, m)
        except OLBError as exc:
            return ScanCell(k, m, float("nan"), f"{type(exc).__name__}: {exc}")
        return ScanCell(k, m, float(np.max(np.hypot(*(orb.vertices - origin).T))))

    mapper = executor.map if executor is not None else map
    cells = list(mapper(cell, jobs))
    table = {}
    for c in cells:
        if not c.error:
            table[c.k] = max(table.get(c.k, 0.0), c.max_radius)
    return table, cells
