"""Behaviour of the map far from the table.

Far away, two steps of the map move a point at polar coordinates
``(r, alpha)`` (about an interior origin) by ``2 w(alpha)`` clockwise along
the circle of radius ``r``, i.e. approximately by the time-1 flow of the
degree-0 field ``X = -(2 w(alpha) / r) d/d alpha``.  This module provides
the fields, their flows, residual reports against the map, the expansion of
one step in the chart ``(alpha, rho = 1/r)``, and a coordinate change that
brings the double step to the normal form ``x' = x + y``, ``y' = y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import AtOrigin, ExtrapolationUnstable, SingularF, TooFewPoints
from .geometry import tangent_fan
from .olbmap import orbit, step

TWO_PI = 2.0 * pi
RICHARDSON_RHOS = (1e-3, 5e-4, 2.5e-4)
# generic interior origin for the decay check; see verify.main1
MAIN1_ORIGIN = (0.3, 0.2)


def _polar(x, origin):
    d = np.asarray(x, dtype=float) - np.asarray(origin, dtype=float)
    r = float(np.hypot(d[0], d[1]))
    if r == 0.0:
        raise AtOrigin("the field is singular at the origin")
    return r, float(np.arctan2(d[1], d[0]))


@dataclass(frozen=True)
class RadialField:
    """Degree-0 field ``-(speed(alpha) / r) d/d alpha`` about ``origin``.

    Its Cartesian magnitude is ``speed(alpha)``, clockwise.
    """

    origin: tuple
    angular_speed: object
    name: str = "field"

    def __call__(self, x):
        _, a = _polar(x, self.origin)
        s = self.angular_speed(a)
        return -s * np.array([-np.sin(a), np.cos(a)])

    def flow(self, x, t=1.0):
        """Time-``t`` flow; ``r`` is kept fixed and the angle solves
        ``int_{alpha_t}^{alpha} r / speed = t``."""
        r, a = _polar(x, self.origin)
        r, b = flow_polar(self.angular_speed, r, a, t)
        return np.asarray(self.origin) + r * np.array([np.cos(b), np.sin(b)])


def flow_polar(speed, r, alpha, t=1.0):
    """Angle reached by ``d alpha/dt = -speed(alpha) / r`` after time ``t``.

    Returns ``(r, alpha_t)`` with ``r`` passed through untouched.
    """
    grid = alpha - np.linspace(0.0, TWO_PI, 257)
    s = np.array([speed(u) for u in grid])
    lo_speed, hi_speed = s.min(), s.max()

    def elapsed(end):
        return quad(lambda u: r / speed(u), end, alpha, epsabs=1e-14, epsrel=1e-13, limit=200)[0] - t

    lo = alpha - 1.01 * t * hi_speed / r
    hi = alpha - 0.99 * t * lo_speed / r
    end = brentq(elapsed, lo, hi, xtol=1e-15, rtol=8.9e-16)
    return r, end


def field_X(oval, x, origin=None):
    """Value of ``X`` at ``x``: magnitude ``2 w(alpha)``, clockwise."""
    origin = oval.origin if origin is None else origin
    return x_field(oval, origin)(x)


def x_field(oval, origin=None):
    origin = oval.origin if origin is None else origin
    return RadialField(tuple(origin), lambda a: 2.0 * float(oval.width(a)), "X")


def y_field(half_length=1.0):
    """Field of the two-endpoint Poncelet double step; speed is twice the
    width ``2 a |sin alpha|`` of the segment."""
    return RadialField((0.0, 0.0), lambda a: 4.0 * half_length * abs(np.sin(a)), "Y")


def field_Y(x, half_length=1.0):
    return y_field(half_length)(x)


def flow_time1(oval, x, origin=None):
    """Time-1 flow of ``X``; the radius about the origin is unchanged."""
    return x_field(oval, origin).flow(x)


def main1_residual(oval, x, origin=None):
    """``|F^2(x) - Phi(x)|`` where ``Phi`` is the time-1 flow of ``X``."""
    x = np.asarray(x, dtype=float)
    origin = oval.origin if origin is None else origin
    if np.hypot(*(x - np.asarray(origin))) < 10.0 * oval.diameter:
        raise ValueError("point must be at least 10 diameters from the origin")
    return float(np.linalg.norm(orbit(oval, x, 1, stride=2)[1] - flow_time1(oval, x, origin)))


@dataclass
class AsymptoticReport:
    radii: list
    sup_residual: list
    n_dirs: int
    origin: tuple
    per_direction: list = field(default_factory=list, repr=False)

    @property
    def scaled(self):
        return [r * s for r, s in zip(self.radii, self.sup_residual)]


def main1_report(oval, radii, n_dirs=64, origin=MAIN1_ORIGIN, executor=None):
    """Sup over ``n_dirs`` directions of ``|F^2 - Phi|`` at each radius."""
    origin = oval.origin if origin is None else tuple(origin)
    dirs = np.arange(n_dirs) * (TWO_PI / n_dirs)

    def cell(r):
        pts = np.asarray(origin) + r * np.column_stack([np.cos(dirs), np.sin(dirs)])
        return [main1_residual(oval, p, origin) for p in pts]

    mapper = executor.map if executor is not None else map
    rows = list(mapper(cell, radii))
    return AsymptoticReport(
        radii=[float(r) for r in radii],
        sup_residual=[max(row) for row in rows],
        n_dirs=n_dirs,
        origin=origin,
        per_direction=rows,
    )


def decay_fit(report):
    """``(C_hat, slope)``: the largest ``r * residual`` and the least-squares
    slope of ``log residual`` against ``log r``."""
    if len(report.radii) < 3:
        raise TooFewPoints("decay fit needs at least three radii")
    r = np.asarray(report.radii, dtype=float)
    s = np.asarray(report.sup_residual, dtype=float)
    slope = np.polyfit(np.log(r), np.log(s), 1)[0]
    return float(np.max(r * s)), float(slope)


@dataclass(frozen=True)
class StabilityScan:
    r_min: float
    r_max: float
    max_jump: float


def stability_scan(oval, x0, n, origin=None):
    """Radial extent of ``n`` double steps from ``x0`` and the largest
    single double-step displacement."""
    origin = np.asarray(oval.origin if origin is None else origin)
    pts = orbit(oval, x0, n, stride=2)
    r = np.hypot(*(pts - origin).T)
    jumps = np.hypot(*np.diff(pts, axis=0).T)
    return StabilityScan(float(r.min()), float(r.max()), float(jumps.max()))


# -- chart at infinity ----------------------------------------------------------


@dataclass(frozen=True)
class InfinityChart:
    """Coefficients of one step in ``(alpha, rho)``:
    ``alpha' = alpha + pi + f rho + ...``, ``rho' = rho + g rho^2 + ...``."""

    alphas: np.ndarray
    f: np.ndarray
    g: np.ndarray
    rhos: tuple

    def double_step(self):
        """Coefficients ``(F, G)`` of two steps (needs an even uniform grid)."""
        n = len(self.alphas)
        if n % 2:
            raise ValueError("double-step coefficients need an even grid")
        return self.f + np.roll(self.f, -n // 2), self.g + np.roll(self.g, -n // 2)


def _wrap_pi(a):
    return (a + pi) % TWO_PI - pi


def chart_step(oval, alpha, rho):
    """One step in chart coordinates: returns ``(alpha' - alpha - pi, rho')``."""
    O = np.asarray(oval.origin)
    x = O + (1.0 / rho) * np.array([np.cos(alpha), np.sin(alpha)])
    img = step(oval, x).image - O
    return _wrap_pi(np.arctan2(img[1], img[0]) - alpha - pi), 1.0 / np.hypot(*img)


def _richardson(vals, tol, what):
    r1a = 2 * vals[1] - vals[0]
    r1b = 2 * vals[2] - vals[1]
    est = (4 * r1b - r1a) / 3
    if abs(r1a - r1b) > tol * max(abs(est), 1.0):
        raise ExtrapolationUnstable(f"{what}: estimates {r1a:.6g} and {r1b:.6g} disagree")
    return est


def infinity_expansion(oval, alpha, rhos=RICHARDSON_RHOS, tol=1e-3):
    """``(f(alpha), g(alpha))`` by Richardson extrapolation over ``rhos``.

    Raises
    ------
    ExtrapolationUnstable
        If the two first-order extrapolants differ by more than ``tol``
        (relative, with an absolute floor of ``tol``).
    """
    fs, gs = [], []
    for rho in rhos:
        da, rho2 = chart_step(oval, alpha, rho)
        fs.append(da / rho)
        gs.append((rho2 - rho) / rho**2)
    return _richardson(fs, tol, "f"), _richardson(gs, tol, "g")


def infinity_chart(oval, n=64, rhos=RICHARDSON_RHOS):
    alphas = np.arange(n) * (TWO_PI / n)
    fg = np.array([infinity_expansion(oval, a, rhos) for a in alphas])
    return InfinityChart(alphas, fg[:, 0], fg[:, 1], tuple(rhos))


@dataclass(frozen=True)
class LazutkinChange:
    """``x = a(alpha)``, ``y = b(alpha) rho`` on a uniform periodic grid."""

    alphas: np.ndarray
    a: np.ndarray
    b: np.ndarray
    _a_spline: object = field(repr=False)
    _b_spline: object = field(repr=False)
    _a_period: float = field(repr=False)

    def x(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        k = np.floor(alpha / TWO_PI)
        return self._a_spline(alpha - k * TWO_PI) + k * self._a_period

    def y(self, alpha, rho):
        return self._b_spline(np.mod(alpha, TWO_PI)) * rho


def _periodic_spline(alphas, vals):
    return CubicSpline(np.append(alphas, TWO_PI), np.append(vals, vals[0]), bc_type="periodic")


def lazutkin_change(f, g, alphas=None):
    """Coordinates in which ``alpha' = alpha + f rho``, ``rho' = rho + g rho^2``
    becomes ``x' = x + y + O(y^2)``, ``y' = y + O(y^3)``.

    ``b = exp(int -g/f)`` and ``a = int b/f``, both from 0.  The integrals
    are exact integrals of periodic cubic splines through the grid values.

    Raises
    ------
    SingularF
        If ``|f| < 1e-8`` somewhere on the grid.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if alphas is None:
        alphas = np.arange(len(f)) * (TWO_PI / len(f))
    if np.min(np.abs(f)) < 1e-8:
        raise SingularF("f vanishes on the grid")
    knots = np.append(alphas, TWO_PI)
    b_ext = np.exp(_periodic_spline(alphas, -g / f).antiderivative()(knots))
    # b is periodic only when -g/f has zero mean
    bc = "periodic" if abs(b_ext[-1] - b_ext[0]) < 1e-12 else "not-a-knot"
    b_spline = CubicSpline(knots, b_ext, bc_type=bc)
    a_spline = CubicSpline(knots, b_ext / np.append(f, f[0]), bc_type=bc).antiderivative()
    return LazutkinChange(
        alphas=np.asarray(alphas),
        a=a_spline(alphas),
        b=b_ext[:-1],
        _a_spline=a_spline,
        _b_spline=b_spline,
        _a_period=float(a_spline(TWO_PI)),
    )


@dataclass(frozen=True)
class NormalFormCheck:
    rho: float
    x_ratio: float  # max |x' - x - y| / y^2
    y_ratio: float  # max |y' - y| / y^3


def normal_form_check(oval, change, rhos=(1e-3, 5e-4), n=32):
    """Apply two steps at ``n`` angles per ``rho`` and measure the
    deviation from the normal form in the transformed coordinates."""
    O = np.asarray(oval.origin)
    out = []
    for rho in rhos:
        xr = yr = 0.0
        for alpha in np.arange(n) * (TWO_PI / n):
            p = O + (1.0 / rho) * np.array([np.cos(alpha), np.sin(alpha)])
            q = orbit(oval, p, 1, stride=2)[1] - O
            alpha2 = alpha + _wrap_pi(np.arctan2(q[1], q[0]) - alpha)
            rho2 = 1.0 / np.hypot(*q)
            x, y = change.x(alpha), change.y(alpha, rho)
            x2, y2 = change.x(alpha2), change.y(alpha2, rho2)
            xr = max(xr, abs(x2 - x - y) / y**2)
            yr = max(yr, abs(y2 - y) / abs(y) ** 3)
        out.append(NormalFormCheck(rho, float(xr), float(yr)))
    return out


def outer_area_billiard_step(oval, x):
    """Reflect ``x`` in its positive tangency point."""
    x = np.asarray(x, dtype=float)
    return 2.0 * tangent_fan(oval, x).pos.position - x


def outer_area_orbit(oval, x0, n, stride=2):
    """``x0`` and ``n`` iterates of the outer area billiard (or its square)."""
    pts = [np.asarray(x0, dtype=float)]
    x = pts[0]
    for _ in range(n):
        for _ in range(stride):
            x = outer_area_billiard_step(oval, x)
        pts.append(x)
    return np.array(pts)
