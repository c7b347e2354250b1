"""Pure-Python implementation of the hot kernels.

Mirrors ``_ckernel.pyx`` function for function; :mod:`olb.kernel` picks one
of the two at import time.  A table is passed as ``(code, params)`` where
``params`` is a flat float sequence:

==========  ====  ==========================================
kind        code  params
==========  ====  ==========================================
circle      0     r
ellipse     1     a, b
lp          2     q (dual exponent), scale
fourier     3     c0, K, a_1..a_K, b_1..b_K
==========  ====  ==========================================

Tangency points are addressed by outward-normal angle.  An exterior apex is
identified with the pair ``(a1, a2)`` of its negative and positive tangency
angles, ``0 < a2 - a1 < pi``.
"""

from math import cos, sin, tan, pi, fabs, copysign, fmod

import numpy as np
from scipy.optimize import brentq

BACKEND = "python"

CIRCLE, ELLIPSE, LP, FOURIER = 0, 1, 2, 3

XTOL = 1e-15
RTOL = 8.9e-16
MAXITER = 100
TWO_PI = 2.0 * pi


def support(code, params, alpha):
    """Return ``(p, p', p'')`` at normal angle ``alpha``."""
    if code == CIRCLE:
        return params[0], 0.0, 0.0
    c, s = cos(alpha), sin(alpha)
    if code == ELLIPSE:
        a, b = params[0], params[1]
        d = b * b - a * a
        q = a * a * c * c + b * b * s * s
        p = q ** 0.5
        q1 = 2.0 * d * s * c
        q2 = 2.0 * d * (c * c - s * s)
        return p, q1 / (2.0 * p), q2 / (2.0 * p) - q1 * q1 / (4.0 * p * q)
    if code == LP:
        qe, scale = params[0], params[1]
        ac, as_ = fabs(c), fabs(s)
        S = ac ** qe + as_ ** qe
        S1 = qe * (-(ac ** (qe - 1.0)) * copysign(1.0, c) * s
                   + as_ ** (qe - 1.0) * copysign(1.0, s) * c)
        # q >= 2 is enforced upstream, so |c|^(q-2) is finite; 0**0 == 1
        S2 = qe * ((qe - 1.0) * ac ** (qe - 2.0) * s * s - ac ** qe
                   + (qe - 1.0) * as_ ** (qe - 2.0) * c * c - as_ ** qe)
        inv = 1.0 / qe
        h = S ** inv
        h1 = inv * S ** (inv - 1.0) * S1
        h2 = inv * (inv - 1.0) * S ** (inv - 2.0) * S1 * S1 + inv * S ** (inv - 1.0) * S2
        return scale * h, scale * h1, scale * h2
    if code == FOURIER:
        K = int(params[1])
        p = params[0]
        p1 = p2 = 0.0
        for k in range(1, K + 1):
            ak, bk = params[1 + k], params[1 + K + k]
            ck, sk = cos(k * alpha), sin(k * alpha)
            p += ak * ck + bk * sk
            p1 += k * (bk * ck - ak * sk)
            p2 -= k * k * (ak * ck + bk * sk)
        return p, p1, p2
    raise ValueError(f"unknown table code {code}")


def point(code, params, alpha):
    p, p1, _ = support(code, params, alpha)
    c, s = cos(alpha), sin(alpha)
    return p * c - p1 * s, p * s + p1 * c


def apex(code, params, a1, a2):
    """Intersection of the tangent lines at ``a1`` and ``a2``.

    Returns ``(x, y, len1, len2)`` where ``len1``/``len2`` are the distances
    from the apex to the tangency points at ``a1``/``a2``.
    """
    d = a2 - a1
    sd, cd = sin(d), cos(d)
    p, p1, _ = support(code, params, a1)
    q, q1, _ = support(code, params, a2)
    len1 = (q - p * cd) / sd - p1
    len2 = (p - q * cd) / sd + q1
    c, s = cos(a1), sin(a1)
    x = p * c - p1 * s - len1 * s
    y = p * s + p1 * c + len1 * c
    return x, y, len1, len2


def _gap(code, params, a2, beta, x2, y2):
    # distance from the tangency point at a2 to the support line at beta
    p = support(code, params, beta)[0]
    return p - x2 * cos(beta) - y2 * sin(beta)


def exit_angle(code, params, a1, a2):
    """Tangency angle of the second common tangent of the table and the
    auxiliary circle, found from ``dist(center, line_beta) = radius``."""
    len2 = apex(code, params, a1, a2)[3]
    rho = len2 * tan(0.5 * (a2 - a1))
    x2, y2 = point(code, params, a2)

    def h(beta):
        c = cos(0.5 * (beta - a2))
        return _gap(code, params, a2, beta, x2, y2) - 2.0 * rho * c * c

    return brentq(h, a2, a2 + pi, xtol=XTOL, rtol=RTOL, maxiter=MAXITER)


def _arc_derivatives(code, params, a1, a2):
    # (dH/dx, dH/dx') per arc length
    d = a2 - a1
    _, _, len1, len2 = apex(code, params, a1, a2)
    p, _, p2 = support(code, params, a1)
    q, _, q2 = support(code, params, a2)
    cot_half_phi = tan(0.5 * d)
    d1 = -len1 * cot_half_phi / (p + p2) - 1.0
    d2 = len2 * cot_half_phi / (q + q2) + 1.0
    return d1, d2


def variational_angle(code, params, a1, a2, eps=1e-12):
    """Solve ``dH/dx'(a1, a2) + dH/dx(a2, beta) = 0`` for ``beta``."""
    lhs = _arc_derivatives(code, params, a1, a2)[1]

    def f(beta):
        return lhs + _arc_derivatives(code, params, a2, beta)[0]

    lo, hi = a2 + eps, a2 + pi - eps
    if not f(lo) > 0.0 > f(hi):
        raise ArithmeticError("no sign change for the generating relation")
    return brentq(f, lo, hi, xtol=XTOL, rtol=RTOL, maxiter=MAXITER)


def iterate(code, params, a1, a2, n):
    """Iterate the map ``n`` times in tangency coordinates.

    Returns an ``(n + 1, 2)`` array of ``(a1, a2)`` pairs with ``a1`` reduced
    to ``[0, 2 pi)``.
    """
    out = np.empty((n + 1, 2))
    shift = TWO_PI * np.floor(a1 / TWO_PI)
    a1 -= shift
    a2 -= shift
    out[0, 0], out[0, 1] = a1, a2
    for i in range(1, n + 1):
        b = exit_angle(code, params, a1, a2)
        a1, a2 = a2, b
        if a1 >= TWO_PI:
            a1 -= TWO_PI
            a2 -= TWO_PI
        out[i, 0], out[i, 1] = a1, a2
    return out


def apexes(code, params, pairs):
    pairs = np.asarray(pairs, dtype=float)
    out = np.empty((pairs.shape[0], 2))
    for i in range(pairs.shape[0]):
        x, y, _, _ = apex(code, params, pairs[i, 0], pairs[i, 1])
        out[i, 0], out[i, 1] = x, y
    return out


def wrap(a):
    r = fmod(a, TWO_PI)
    return r + TWO_PI if r < 0.0 else r
