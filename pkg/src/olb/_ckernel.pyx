# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the hot kernels.

Same functions and table encoding as ``_pykernel``; root finding goes
through scipy's C-level ``brentq``.
"""

from libc.math cimport cos, sin, tan, fabs, pow, sqrt, floor, fmod, M_PI
from scipy.optimize.cython_optimize cimport brentq

import numpy as np

BACKEND = "cython"

cdef enum:
    CIRCLE = 0
    ELLIPSE = 1
    LP = 2
    FOURIER = 3

cdef double XTOL = 1e-15
cdef double RTOL = 8.9e-16
cdef int MAXITER = 100
cdef double TWO_PI = 2.0 * M_PI


cdef struct Table:
    int code
    const double* params


cdef struct ExitArgs:
    Table* t
    double a2
    double x2
    double y2
    double rho


cdef struct VarArgs:
    Table* t
    double a2
    double lhs


cdef inline double _sign(double x) noexcept nogil:
    return 1.0 if x >= 0.0 else -1.0


cdef void _support(Table* t, double alpha, double* p, double* p1, double* p2) noexcept nogil:
    cdef double c, s, a, b, d, q, q1, q2, qe, scale, ac, as_, S, S1, S2, inv, h
    cdef double ak, bk, ck, sk
    cdef int K, k
    cdef const double* prm = t.params
    if t.code == CIRCLE:
        p[0] = prm[0]
        p1[0] = 0.0
        p2[0] = 0.0
        return
    c = cos(alpha)
    s = sin(alpha)
    if t.code == ELLIPSE:
        a = prm[0]
        b = prm[1]
        d = b * b - a * a
        q = a * a * c * c + b * b * s * s
        h = sqrt(q)
        q1 = 2.0 * d * s * c
        q2 = 2.0 * d * (c * c - s * s)
        p[0] = h
        p1[0] = q1 / (2.0 * h)
        p2[0] = q2 / (2.0 * h) - q1 * q1 / (4.0 * h * q)
        return
    if t.code == LP:
        qe = prm[0]
        scale = prm[1]
        ac = fabs(c)
        as_ = fabs(s)
        S = pow(ac, qe) + pow(as_, qe)
        S1 = qe * (-pow(ac, qe - 1.0) * _sign(c) * s + pow(as_, qe - 1.0) * _sign(s) * c)
        S2 = qe * ((qe - 1.0) * pow(ac, qe - 2.0) * s * s - pow(ac, qe)
                   + (qe - 1.0) * pow(as_, qe - 2.0) * c * c - pow(as_, qe))
        inv = 1.0 / qe
        p[0] = scale * pow(S, inv)
        p1[0] = scale * inv * pow(S, inv - 1.0) * S1
        p2[0] = scale * (inv * (inv - 1.0) * pow(S, inv - 2.0) * S1 * S1
                         + inv * pow(S, inv - 1.0) * S2)
        return
    # FOURIER
    K = <int>prm[1]
    p[0] = prm[0]
    p1[0] = 0.0
    p2[0] = 0.0
    for k in range(1, K + 1):
        ak = prm[1 + k]
        bk = prm[1 + K + k]
        ck = cos(k * alpha)
        sk = sin(k * alpha)
        p[0] += ak * ck + bk * sk
        p1[0] += k * (bk * ck - ak * sk)
        p2[0] -= k * k * (ak * ck + bk * sk)


cdef void _point(Table* t, double alpha, double* x, double* y) noexcept nogil:
    cdef double p, p1, p2, c, s
    _support(t, alpha, &p, &p1, &p2)
    c = cos(alpha)
    s = sin(alpha)
    x[0] = p * c - p1 * s
    y[0] = p * s + p1 * c


cdef void _apex(Table* t, double a1, double a2, double* x, double* y,
                double* len1, double* len2) noexcept nogil:
    cdef double d = a2 - a1
    cdef double sd = sin(d), cd = cos(d)
    cdef double p, p1, p2, q, q1, q2, c, s
    _support(t, a1, &p, &p1, &p2)
    _support(t, a2, &q, &q1, &q2)
    len1[0] = (q - p * cd) / sd - p1
    len2[0] = (p - q * cd) / sd + q1
    c = cos(a1)
    s = sin(a1)
    x[0] = p * c - p1 * s - len1[0] * s
    y[0] = p * s + p1 * c + len1[0] * c


cdef double _h_exit(double beta, void* args) noexcept nogil:
    cdef ExitArgs* e = <ExitArgs*>args
    cdef double p, p1, p2, c
    _support(e.t, beta, &p, &p1, &p2)
    c = cos(0.5 * (beta - e.a2))
    return p - e.x2 * cos(beta) - e.y2 * sin(beta) - 2.0 * e.rho * c * c


cdef double _exit(Table* t, double a1, double a2) noexcept nogil:
    cdef ExitArgs e
    cdef double x, y, len1, len2
    _apex(t, a1, a2, &x, &y, &len1, &len2)
    e.t = t
    e.a2 = a2
    e.rho = len2 * tan(0.5 * (a2 - a1))
    _point(t, a2, &e.x2, &e.y2)
    return brentq(_h_exit, a2, a2 + M_PI, &e, XTOL, RTOL, MAXITER, NULL)


cdef void _arc_derivatives(Table* t, double a1, double a2, double* d1, double* d2) noexcept nogil:
    cdef double x, y, len1, len2, p, p1, p2, q, q1, q2, cot_half_phi
    _apex(t, a1, a2, &x, &y, &len1, &len2)
    _support(t, a1, &p, &p1, &p2)
    _support(t, a2, &q, &q1, &q2)
    cot_half_phi = tan(0.5 * (a2 - a1))
    d1[0] = -len1 * cot_half_phi / (p + p2) - 1.0
    d2[0] = len2 * cot_half_phi / (q + q2) + 1.0


cdef double _f_var(double beta, void* args) noexcept nogil:
    cdef VarArgs* v = <VarArgs*>args
    cdef double d1, d2
    _arc_derivatives(v.t, v.a2, beta, &d1, &d2)
    return v.lhs + d1


cdef Table _table(int code, const double[::1] params):
    cdef Table t
    t.code = code
    t.params = &params[0]
    return t


def support(int code, params, double alpha):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    cdef double p, p1, p2
    _support(&t, alpha, &p, &p1, &p2)
    return p, p1, p2


def point(int code, params, double alpha):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    cdef double x, y
    _point(&t, alpha, &x, &y)
    return x, y


def apex(int code, params, double a1, double a2):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    cdef double x, y, len1, len2
    _apex(&t, a1, a2, &x, &y, &len1, &len2)
    return x, y, len1, len2


def exit_angle(int code, params, double a1, double a2):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    return _exit(&t, a1, a2)


def variational_angle(int code, params, double a1, double a2, double eps=1e-12):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    cdef VarArgs v
    cdef double d1, d2, lo = a2 + eps, hi = a2 + M_PI - eps
    _arc_derivatives(&t, a1, a2, &d1, &d2)
    v.t = &t
    v.a2 = a2
    v.lhs = d2
    if not (_f_var(lo, &v) > 0.0 > _f_var(hi, &v)):
        raise ArithmeticError("no sign change for the generating relation")
    return brentq(_f_var, lo, hi, &v, XTOL, RTOL, MAXITER, NULL)


def iterate(int code, params, double a1, double a2, Py_ssize_t n):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    out_arr = np.empty((n + 1, 2))
    cdef double[:, ::1] out = out_arr
    cdef double shift = TWO_PI * floor(a1 / TWO_PI), b
    cdef Py_ssize_t i
    a1 -= shift
    a2 -= shift
    out[0, 0] = a1
    out[0, 1] = a2
    with nogil:
        for i in range(1, n + 1):
            b = _exit(&t, a1, a2)
            a1 = a2
            a2 = b
            if a1 >= TWO_PI:
                a1 -= TWO_PI
                a2 -= TWO_PI
            out[i, 0] = a1
            out[i, 1] = a2
    return out_arr


def apexes(int code, params, pairs):
    cdef const double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Table t = _table(code, prm)
    cdef const double[:, ::1] pr = np.ascontiguousarray(pairs, dtype=np.float64)
    out_arr = np.empty((pr.shape[0], 2))
    cdef double[:, ::1] out = out_arr
    cdef double x, y, len1, len2
    cdef Py_ssize_t i
    with nogil:
        for i in range(pr.shape[0]):
            _apex(&t, pr[i, 0], pr[i, 1], &x, &y, &len1, &len2)
            out[i, 0] = x
            out[i, 1] = y
    return out_arr


def wrap(double a):
    cdef double r = fmod(a, TWO_PI)
    return r + TWO_PI if r < 0.0 else r
