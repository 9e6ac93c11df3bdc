"""Pure-Python fallback for the per-mode root-solving kernels.

Mirrors the compiled extension ``gaussib._core`` function for function.
The hot path is the scalar root solve of the first-order condition
``g(u) = 1/beta`` per spectrum mode: closed-form cubic roots, a Newton
polish on the polynomial, a residual filter through ``g``, and a monotone
bisection fallback.  Failures are signalled with NaN; callers translate.
"""

import math

import numpy as np

# Residual acceptance for candidate roots, in units of g*beta - 1.
TOL_ROOT = 1e-9
# Relative width at which bisection stops.
BISECT_WIDTH = 1e-14
# Bracket expansion gives up beyond this (unreachable for valid inputs).
BRACKET_CAP = 1e18

KIND_SHANNON = 0
KIND_RENYI = 1
KIND_JEFFREYS = 2


def g_eval(u: float, lam: float, qbar: float) -> float:
    """Per-mode tradeoff function; strictly decreasing in u on [0, inf)."""
    corr = qbar * (1.0 + qbar)
    num = 1.0 + corr * (1.0 - lam) * u / (1.0 + (1.0 - qbar * qbar * (1.0 - lam)) * u)
    den = 1.0 + corr * u / (1.0 + (1.0 - qbar * qbar) * u)
    return (1.0 - lam) / (1.0 + u * lam) * num / den


def cubic_coeffs(lam: float, qbar: float, beta: float):
    """Coefficients (a, b, c, d) of the polynomial form of g(u) = 1/beta."""
    d = 1.0 - beta * (1.0 - lam)
    a = lam * (1.0 + qbar) * (1.0 - (1.0 - lam) * qbar * qbar)
    b = lam * (2.0 + 2.0 * qbar + lam * qbar * qbar) + d * (1.0 + qbar) * (
        1.0 - lam * qbar - (1.0 - lam) * qbar * qbar
    )
    c = lam * (1.0 + qbar + qbar * qbar) + d * (
        2.0 + (1.0 - lam) * qbar - qbar * qbar
    )
    return a, b, c, d


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _quadratic_real_roots(b: float, c: float, d: float):
    if b == 0.0:
        if c == 0.0:
            return []
        return [-d / c]
    disc = c * c - 4.0 * b * d
    if disc < 0.0:
        return []
    s = math.sqrt(disc)
    if c >= 0.0:
        qq = -0.5 * (c + s)
    else:
        qq = -0.5 * (c - s)
    roots = [qq / b]
    if qq != 0.0:
        roots.append(d / qq)
    return roots


def cubic_real_roots(a: float, b: float, c: float, d: float):
    """All real roots of a*u^3 + b*u^2 + c*u + d, unpolished."""
    if a == 0.0:
        return _quadratic_real_roots(b, c, d)
    bn, cn, dn = b / a, c / a, d / a
    off = bn / 3.0
    p = cn - bn * bn / 3.0
    q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn
    disc = 0.25 * q * q + p * p * p / 27.0
    if disc > 0.0:
        s = math.sqrt(disc)
        t = _cbrt(-0.5 * q + s) + _cbrt(-0.5 * q - s)
        return [t - off]
    if disc < 0.0:
        r = math.sqrt(-p / 3.0)
        arg = -0.5 * q / (r * r * r)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        return [
            2.0 * r * math.cos((phi - 2.0 * math.pi * k) / 3.0) - off
            for k in range(3)
        ]
    if p == 0.0:
        return [-off]
    return [3.0 * q / p - off, -1.5 * q / p - off]


def _polish_on_cubic(u: float, a: float, b: float, c: float, d: float) -> float:
    for _ in range(12):
        f = ((a * u + b) * u + c) * u + d
        df = (3.0 * a * u + 2.0 * b) * u + c
        if df == 0.0:
            break
        step = f / df
        u_new = u - step
        if not math.isfinite(u_new):
            break
        u = u_new
        if abs(step) <= 1e-16 * (1.0 + abs(u)):
            break
    return u


def solve_mode_bisect(lam: float, qbar: float, beta: float) -> float:
    """Monotone bisection on g(u) = 1/beta; the fallback and cross-check path."""
    target = 1.0 / beta
    if g_eval(0.0, lam, qbar) <= target:
        return 0.0
    hi = 1.0
    while g_eval(hi, lam, qbar) > target:
        hi *= 2.0
        if hi > BRACKET_CAP:
            return math.nan
    lo = 0.0 if hi == 1.0 else hi * 0.5
    while hi - lo > BISECT_WIDTH * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if g_eval(mid, lam, qbar) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_mode_cubic(lam: float, qbar: float, beta: float) -> float:
    """Closed-form path only: cubic roots, polish, residual filter.

    Returns NaN when no single residual-clean positive root survives, in
    which case callers fall back to bisection.
    """
    a, b, c, d = cubic_coeffs(lam, qbar, beta)
    if d >= 0.0:
        return 0.0
    accepted: list[float] = []
    for root in cubic_real_roots(a, b, c, d):
        if not math.isfinite(root) or root <= 0.0:
            continue
        u = _polish_on_cubic(root, a, b, c, d)
        if not math.isfinite(u) or u <= 0.0:
            continue
        if abs(g_eval(u, lam, qbar) * beta - 1.0) >= TOL_ROOT:
            continue
        if all(abs(u - v) > 1e-9 * (1.0 + u) for v in accepted):
            accepted.append(u)
    if len(accepted) == 1:
        return accepted[0]
    return math.nan


def solve_mode(lam: float, qbar: float, beta: float) -> float:
    """Unique nonnegative solution of g(u) = 1/beta for one mode."""
    if lam >= 1.0:
        return 0.0
    u = solve_mode_cubic(lam, qbar, beta)
    if math.isnan(u):
        u = solve_mode_bisect(lam, qbar, beta)
    return u


def solve_mode_shannon(lam: float, beta: float) -> float:
    if lam >= 1.0:
        return 0.0
    d = 1.0 - beta * (1.0 - lam)
    return 0.0 if d >= 0.0 else -d / lam


def solve_mode_jeffreys(lam: float, beta: float) -> float:
    if lam >= 1.0:
        return 0.0
    s = beta * (1.0 - lam)
    return 0.0 if s <= 1.0 else (math.sqrt(s) - 1.0) / lam


def solve_modes_grid(lams, betas, kind: int, qbar: float) -> np.ndarray:
    """Solve every (beta, mode) pair; returns an array of shape (n_beta, n_modes)."""
    lams = np.asarray(lams, dtype=float)
    betas = np.asarray(betas, dtype=float)
    out = np.empty((betas.size, lams.size))
    for i, beta in enumerate(betas):
        for k, lam in enumerate(lams):
            if kind == KIND_SHANNON:
                out[i, k] = solve_mode_shannon(lam, beta)
            elif kind == KIND_JEFFREYS:
                out[i, k] = solve_mode_jeffreys(lam, beta)
            else:
                out[i, k] = solve_mode(lam, qbar, beta)
    return out
