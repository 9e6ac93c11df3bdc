# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-mode root-solving kernels.

Function-for-function mirror of ``gaussib._core_py``; see that module for
the algorithm notes.  Failures are signalled with NaN; callers translate.
"""

from libc.math cimport (M_PI, NAN, acos, cbrt, cos, fabs, isfinite, isnan,
                        sqrt)

import numpy as np

TOL_ROOT = 1e-9
BISECT_WIDTH = 1e-14
BRACKET_CAP = 1e18

KIND_SHANNON = 0
KIND_RENYI = 1
KIND_JEFFREYS = 2

DEF _TOL_ROOT = 1e-9
DEF _BISECT_WIDTH = 1e-14
DEF _BRACKET_CAP = 1e18


cdef inline double _g(double u, double lam, double qbar) nogil:
    cdef double corr = qbar * (1.0 + qbar)
    cdef double num = 1.0 + corr * (1.0 - lam) * u / (
        1.0 + (1.0 - qbar * qbar * (1.0 - lam)) * u)
    cdef double den = 1.0 + corr * u / (1.0 + (1.0 - qbar * qbar) * u)
    return (1.0 - lam) / (1.0 + u * lam) * num / den


cdef inline void _coeffs(double lam, double qbar, double beta,
                         double *a, double *b, double *c, double *d) nogil:
    d[0] = 1.0 - beta * (1.0 - lam)
    a[0] = lam * (1.0 + qbar) * (1.0 - (1.0 - lam) * qbar * qbar)
    b[0] = lam * (2.0 + 2.0 * qbar + lam * qbar * qbar) + d[0] * (1.0 + qbar) * (
        1.0 - lam * qbar - (1.0 - lam) * qbar * qbar)
    c[0] = lam * (1.0 + qbar + qbar * qbar) + d[0] * (
        2.0 + (1.0 - lam) * qbar - qbar * qbar)


cdef int _cubic_real_roots(double a, double b, double c, double d,
                           double *roots) nogil:
    """Real roots into roots[0..2]; returns the count."""
    cdef double bn, cn, dn, off, p, q, disc, s, t, r, arg, phi
    cdef int n = 0
    if a == 0.0:
        if b == 0.0:
            if c == 0.0:
                return 0
            roots[0] = -d / c
            return 1
        disc = c * c - 4.0 * b * d
        if disc < 0.0:
            return 0
        s = sqrt(disc)
        if c >= 0.0:
            t = -0.5 * (c + s)
        else:
            t = -0.5 * (c - s)
        roots[0] = t / b
        n = 1
        if t != 0.0:
            roots[1] = d / t
            n = 2
        return n
    bn = b / a
    cn = c / a
    dn = d / a
    off = bn / 3.0
    p = cn - bn * bn / 3.0
    q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn
    disc = 0.25 * q * q + p * p * p / 27.0
    if disc > 0.0:
        s = sqrt(disc)
        t = cbrt(-0.5 * q + s) + cbrt(-0.5 * q - s)
        roots[0] = t - off
        return 1
    if disc < 0.0:
        r = sqrt(-p / 3.0)
        arg = -0.5 * q / (r * r * r)
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        phi = acos(arg)
        roots[0] = 2.0 * r * cos(phi / 3.0) - off
        roots[1] = 2.0 * r * cos((phi - 2.0 * M_PI) / 3.0) - off
        roots[2] = 2.0 * r * cos((phi - 4.0 * M_PI) / 3.0) - off
        return 3
    if p == 0.0:
        roots[0] = -off
        return 1
    roots[0] = 3.0 * q / p - off
    roots[1] = -1.5 * q / p - off
    return 2


cdef inline double _polish(double u, double a, double b, double c,
                           double d) nogil:
    cdef double f, df, step, u_new
    cdef int i
    for i in range(12):
        f = ((a * u + b) * u + c) * u + d
        df = (3.0 * a * u + 2.0 * b) * u + c
        if df == 0.0:
            break
        step = f / df
        u_new = u - step
        if not isfinite(u_new):
            break
        u = u_new
        if fabs(step) <= 1e-16 * (1.0 + fabs(u)):
            break
    return u


cdef double _solve_bisect(double lam, double qbar, double beta) nogil:
    cdef double target = 1.0 / beta
    cdef double hi = 1.0
    cdef double lo, mid
    if _g(0.0, lam, qbar) <= target:
        return 0.0
    while _g(hi, lam, qbar) > target:
        hi *= 2.0
        if hi > _BRACKET_CAP:
            return NAN
    lo = 0.0 if hi == 1.0 else hi * 0.5
    while hi - lo > _BISECT_WIDTH * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if _g(mid, lam, qbar) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef double _solve_cubic(double lam, double qbar, double beta) nogil:
    cdef double a, b, c, d, u, root
    cdef double roots[3]
    cdef double accepted[3]
    cdef int n, i, j, n_acc = 0
    cdef bint fresh
    _coeffs(lam, qbar, beta, &a, &b, &c, &d)
    if d >= 0.0:
        return 0.0
    n = _cubic_real_roots(a, b, c, d, roots)
    for i in range(n):
        root = roots[i]
        if not isfinite(root) or root <= 0.0:
            continue
        u = _polish(root, a, b, c, d)
        if not isfinite(u) or u <= 0.0:
            continue
        if fabs(_g(u, lam, qbar) * beta - 1.0) >= _TOL_ROOT:
            continue
        fresh = True
        for j in range(n_acc):
            if fabs(u - accepted[j]) <= 1e-9 * (1.0 + u):
                fresh = False
                break
        if fresh:
            accepted[n_acc] = u
            n_acc += 1
    if n_acc == 1:
        return accepted[0]
    return NAN


cdef inline double _solve_mode(double lam, double qbar, double beta) nogil:
    cdef double u
    if lam >= 1.0:
        return 0.0
    u = _solve_cubic(lam, qbar, beta)
    if isnan(u):
        u = _solve_bisect(lam, qbar, beta)
    return u


cdef inline double _solve_shannon(double lam, double beta) nogil:
    cdef double d
    if lam >= 1.0:
        return 0.0
    d = 1.0 - beta * (1.0 - lam)
    return 0.0 if d >= 0.0 else -d / lam


cdef inline double _solve_jeffreys(double lam, double beta) nogil:
    cdef double s
    if lam >= 1.0:
        return 0.0
    s = beta * (1.0 - lam)
    return 0.0 if s <= 1.0 else (sqrt(s) - 1.0) / lam


def g_eval(double u, double lam, double qbar):
    """Per-mode tradeoff function; strictly decreasing in u on [0, inf)."""
    return _g(u, lam, qbar)


def cubic_coeffs(double lam, double qbar, double beta):
    """Coefficients (a, b, c, d) of the polynomial form of g(u) = 1/beta."""
    cdef double a, b, c, d
    _coeffs(lam, qbar, beta, &a, &b, &c, &d)
    return a, b, c, d


def cubic_real_roots(double a, double b, double c, double d):
    """All real roots of a*u^3 + b*u^2 + c*u + d, unpolished."""
    cdef double roots[3]
    cdef int n = _cubic_real_roots(a, b, c, d, roots)
    return [roots[i] for i in range(n)]


def solve_mode_bisect(double lam, double qbar, double beta):
    """Monotone bisection on g(u) = 1/beta; the fallback and cross-check path."""
    return _solve_bisect(lam, qbar, beta)


def solve_mode_cubic(double lam, double qbar, double beta):
    """Closed-form path only: cubic roots, polish, residual filter."""
    return _solve_cubic(lam, qbar, beta)


def solve_mode(double lam, double qbar, double beta):
    """Unique nonnegative solution of g(u) = 1/beta for one mode."""
    return _solve_mode(lam, qbar, beta)


def solve_mode_shannon(double lam, double beta):
    return _solve_shannon(lam, beta)


def solve_mode_jeffreys(double lam, double beta):
    return _solve_jeffreys(lam, beta)


def solve_modes_grid(lams, betas, int kind, double qbar):
    """Solve every (beta, mode) pair; returns an array of shape (n_beta, n_modes)."""
    cdef double[::1] lam_v = np.ascontiguousarray(lams, dtype=np.float64)
    cdef double[::1] beta_v = np.ascontiguousarray(betas, dtype=np.float64)
    out = np.empty((beta_v.shape[0], lam_v.shape[0]))
    cdef double[:, ::1] out_v = out
    cdef Py_ssize_t i, k
    cdef double beta
    with nogil:
        for i in range(beta_v.shape[0]):
            beta = beta_v[i]
            for k in range(lam_v.shape[0]):
                if kind == 0:
                    out_v[i, k] = _solve_shannon(lam_v[k], beta)
                elif kind == 2:
                    out_v[i, k] = _solve_jeffreys(lam_v[k], beta)
                else:
                    out_v[i, k] = _solve_mode(lam_v[k], qbar, beta)
    return out
