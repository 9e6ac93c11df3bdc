"""Exact per-mode solvers for the generalized bottleneck first-order conditions.

Every mode of the spectrum decouples: its optimal reduced weight u depends
only on the mode eigenvalue, the tradeoff parameter beta, and the measure.
A mode activates (u > 0) exactly when beta exceeds ``1 / (1 - lambda)``,
the same critical value for Shannon, every Renyi order in [0, 2], and
Jeffreys.  The Renyi weight is the unique positive root of ``g(u) = 1/beta``
with g strictly decreasing; the root is taken from the equivalent cubic and
cross-checked against a monotone bisection fallback inside the kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaussib.backend import (
    KIND_JEFFREYS,
    KIND_RENYI,
    KIND_SHANNON,
    kernels,
)
from gaussib.encoder import MixingSolution
from gaussib.errors import OutOfRange, RootNotFound
from gaussib.measures import Measure
from gaussib.model import Spectrum

# Residual bound on accepted roots (in units of g*beta - 1).
TOL_ROOT = 1e-9


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise OutOfRange(f"eigenvalue must lie strictly in (0, 1), got {lam}")
    return lam


def _check_q(q: float) -> float:
    q = float(q)
    if not (np.isfinite(q) and 0.0 <= q <= 2.0):
        raise OutOfRange(f"order q must lie in [0, 2], got {q}")
    return q


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (np.isfinite(beta) and beta > 0.0):
        raise OutOfRange(f"beta must be a positive real, got {beta}")
    return beta


@dataclass(frozen=True)
class CubicCoefficients:
    """Coefficients of the cubic whose positive root is the mode weight."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_params(cls, lam: float, q: float, beta: float) -> "CubicCoefficients":
        lam = _check_lambda(lam)
        q = _check_q(q)
        beta = _check_beta(beta)
        a, b, c, d = kernels.cubic_coeffs(lam, 1.0 - q, beta)
        return cls(a, b, c, d)

    def real_roots(self) -> list[float]:
        return kernels.cubic_real_roots(self.a, self.b, self.c, self.d)


def g_q(u: float, lam: float, q: float) -> float:
    """The decreasing per-mode function whose root locates the weight.

    ``g_q(0, lam) = 1 - lam`` for every order, and ``g_q -> 0`` as u grows;
    a mode is active exactly while ``1/beta < g_q(0, lam)``.
    """
    u = float(u)
    if not (np.isfinite(u) and u >= 0.0):
        raise OutOfRange(f"weight u must be nonnegative, got {u}")
    return kernels.g_eval(u, _check_lambda(lam), 1.0 - _check_q(q))


def critical_beta(lam: float) -> float:
    """Tradeoff parameter at which the mode with this eigenvalue activates."""
    return 1.0 / (1.0 - _check_lambda(lam))


def solve_mode_renyi(lam: float, q: float, beta: float) -> float:
    """Optimal Renyi weight for one mode: zero at or below the critical
    beta, otherwise the unique positive root of ``g_q(u, lam) = 1/beta``."""
    lam = _check_lambda(lam)
    q = _check_q(q)
    beta = _check_beta(beta)
    u = kernels.solve_mode(lam, 1.0 - q, beta)
    if np.isnan(u):
        raise RootNotFound(
            f"no admissible root for lam={lam}, q={q}, beta={beta}"
        )
    return u


def solve_mode_shannon(lam: float, beta: float) -> float:
    """Closed-form Shannon weight, ``max(0, (beta*(1-lam) - 1) / lam)``."""
    return kernels.solve_mode_shannon(_check_lambda(lam), _check_beta(beta))


def solve_mode_jeffreys(lam: float, beta: float) -> float:
    """Closed-form Jeffreys weight, ``max(0, (sqrt(beta*(1-lam)) - 1) / lam)``."""
    return kernels.solve_mode_jeffreys(_check_lambda(lam), _check_beta(beta))


def _measure_kind(m: Measure) -> tuple[int, float]:
    if m.tag == "jeffreys":
        return KIND_JEFFREYS, 0.0
    if m.is_shannon_like:
        return KIND_SHANNON, 0.0
    return KIND_RENYI, 1.0 - m.q


def solve_spectrum(spec: Spectrum, m: Measure, beta: float) -> MixingSolution:
    """Optimal weights for every mode of a spectrum at one beta.

    Modes with eigenvalue exactly 1 carry no target information and never
    activate.  Activity flags are ``u > 0``, equivalent to
    ``beta > critical_beta(lam)`` mode by mode.
    """
    beta = _check_beta(beta)
    kind, qbar = _measure_kind(m)
    u = kernels.solve_modes_grid(spec.lambdas, np.array([beta]), kind, qbar)[0]
    if np.any(np.isnan(u)):
        raise RootNotFound(f"per-mode solve failed at beta={beta}")
    return MixingSolution(u_values=u, beta=beta, measure=m, active=u > 0.0)


def solve_spectrum_grid(spec: Spectrum, m: Measure, betas: np.ndarray) -> np.ndarray:
    """Weights for a whole beta grid, shape ``(len(betas), n_modes)``.

    This is the hot path behind frontier sweeps; it runs entirely inside
    the selected kernel backend.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1:
        raise OutOfRange("betas must be a 1-D vector")
    if np.any(~np.isfinite(betas)) or np.any(betas <= 0):
        raise OutOfRange("betas must be positive reals")
    kind, qbar = _measure_kind(m)
    u = kernels.solve_modes_grid(spec.lambdas, betas, kind, qbar)
    if np.any(np.isnan(u)):
        raise RootNotFound("per-mode solve failed somewhere on the beta grid")
    return u
