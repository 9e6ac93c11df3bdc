"""Tradeoff sweeps, bound lines, and Shannon-plane cross-evaluation.

Sweeping beta traces the optimal frontier of extracted versus relevant
information under any measure.  Solutions obtained under a non-Shannon
measure can be re-evaluated with Shannon formulas and compared against the
Shannon-optimal frontier at the same extracted information; the difference
is the information gap reported by :func:`shannon_project`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from gaussib.backend import kernels
from gaussib.encoder import information_sums
from gaussib.errors import NumericalFailure, OutOfRange, Unreachable
from gaussib.measures import Measure
from gaussib.model import Spectrum
from gaussib.solver import solve_spectrum_grid

# Hard cap for frontier inversion; extracted information grows without
# bound in beta, but weights overflow double precision eventually.
BETA_MAX_CAP = 1e8
# A mode counts as activated once its weight exceeds this.
ACTIVATION_EPS = 1e-12
# Relative accuracy of refined activation points.
TRANSITION_REL_TOL = 1e-8


@dataclass(frozen=True)
class InfoPoint:
    """One point of an information plane under a stated measure."""

    beta: float
    omega_tx: float
    omega_ty: float
    measure: Measure
    active_modes: int

    def __post_init__(self):
        if self.omega_ty > self.omega_tx + 1e-10:
            raise NumericalFailure(
                "data processing inequality violated: "
                f"omega_ty={self.omega_ty} > omega_tx={self.omega_tx}"
            )


@dataclass(frozen=True)
class ShannonProjection:
    """A non-Shannon solution re-evaluated on the Shannon plane.

    ``gap = i_ty_max - i_ty`` measures how much relevant Shannon information
    the encoder loses relative to the Shannon-optimal encoder extracting the
    same ``i_tx``.
    """

    beta: float
    i_tx: float
    i_ty: float
    i_ty_max: float
    gap: float


@dataclass(frozen=True)
class BoundCurves:
    """DPI and SDPI reference lines over a grid of extracted information."""

    omega_tx: np.ndarray
    dpi: np.ndarray
    sdpi: np.ndarray
    sdpi_slope: float


def sweep(spec: Spectrum, m: Measure, betas, workers: int = 1) -> list[InfoPoint]:
    """Solve and evaluate the frontier at every beta of an ascending grid.

    Grid points are independent; with ``workers > 1`` the grid is chunked
    across threads and reassembled in input order, so the output does not
    depend on scheduling.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size == 0:
        raise OutOfRange("betas must be a nonempty 1-D vector")
    if np.any(np.diff(betas) < 0):
        raise OutOfRange("betas must be sorted ascending")

    if workers > 1 and betas.size > 1:
        chunks = np.array_split(np.arange(betas.size), min(workers, betas.size))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda idx: solve_spectrum_grid(spec, m, betas[idx]), chunks)
            )
        u_grid = np.vstack(parts)
    else:
        u_grid = solve_spectrum_grid(spec, m, betas)

    tx, ty = information_sums(u_grid, spec.lambdas, m)
    counts = (u_grid > 0.0).sum(axis=1)
    return [
        InfoPoint(
            beta=float(b),
            omega_tx=float(x),
            omega_ty=float(y),
            measure=m,
            active_modes=int(k),
        )
        for b, x, y, k in zip(betas, tx, ty, counts)
    ]


def dpi_bounds(spec: Spectrum, omega_tx_grid) -> BoundCurves:
    """DPI line ``y = x`` and SDPI line ``y = (1 - lambda_min) x``."""
    grid = np.asarray(omega_tx_grid, dtype=float)
    if np.any(grid < 0):
        raise OutOfRange("omega_tx grid must be nonnegative")
    slope = 1.0 - spec.lambda_min
    return BoundCurves(
        omega_tx=grid, dpi=grid.copy(), sdpi=slope * grid, sdpi_slope=slope
    )


def _shannon_coords(spec: Spectrum, beta: float) -> tuple[float, float]:
    u = kernels.solve_modes_grid(spec.lambdas, np.array([beta]), 0, 0.0)[0]
    lam = spec.lambdas
    i_tx = 0.5 * float(np.sum(np.log1p(u)))
    i_ty = 0.5 * float(np.sum(np.log1p(u) - np.log1p(lam * u)))
    return i_tx, i_ty


def shannon_frontier_at(spec: Spectrum, i_tx_target: float) -> float:
    """Relevant information of the Shannon-optimal encoder extracting
    exactly ``i_tx_target`` nats.

    Inverts the (continuous, nondecreasing) map beta -> I(T;X) by bisection
    on beta; the returned point satisfies ``|I(T;X) - target| < 1e-9``.
    Raises Unreachable for targets beyond the cap ``BETA_MAX_CAP``.
    """
    target = float(i_tx_target)
    if not (np.isfinite(target) and target >= 0.0):
        raise OutOfRange(f"target must be nonnegative, got {target}")
    if target == 0.0:
        return 0.0

    finite = spec.lambdas[spec.lambdas < 1.0]
    if finite.size == 0:
        raise Unreachable("no mode carries information; only target 0 is achievable")
    tx_cap, _ = _shannon_coords(spec, BETA_MAX_CAP)
    if target > tx_cap:
        raise Unreachable(
            f"target {target} exceeds the achievable {tx_cap} at the beta cap"
        )

    lo = 1.0 / (1.0 - float(finite.min()))  # first activation
    hi = 2.0 * lo
    while _shannon_coords(spec, hi)[0] < target:
        hi = min(2.0 * hi, BETA_MAX_CAP)
        if hi == BETA_MAX_CAP:
            break
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        i_tx, i_ty = _shannon_coords(spec, mid)
        if abs(i_tx - target) < 1e-9:
            return i_ty
        if i_tx < target:
            lo = mid
        else:
            hi = mid
    raise NumericalFailure("frontier inversion did not reach its residual target")


def shannon_project(spec: Spectrum, m: Measure, beta: float) -> ShannonProjection:
    """Solve under measure ``m`` and evaluate the result on the Shannon plane.

    Shannon-like measures project onto themselves exactly (zero gap by
    construction); anything else is compared against the inverted Shannon
    frontier at its own extracted information.
    """
    from gaussib.solver import solve_spectrum

    sol = solve_spectrum(spec, m, beta)
    i_tx, i_ty = information_sums(sol.u_values, spec.lambdas, Measure.shannon())
    if m.is_shannon_like or i_tx == 0.0:
        i_ty_max = i_ty
    else:
        i_ty_max = shannon_frontier_at(spec, i_tx)
    return ShannonProjection(
        beta=float(beta), i_tx=i_tx, i_ty=i_ty, i_ty_max=i_ty_max,
        gap=i_ty_max - i_ty,
    )


def _mode_weight(lam: float, m: Measure, beta: float) -> float:
    if m.tag == "jeffreys":
        return kernels.solve_mode_jeffreys(lam, beta)
    if m.is_shannon_like:
        return kernels.solve_mode_shannon(lam, beta)
    return kernels.solve_mode(lam, 1.0 - m.q, beta)


def detect_transitions(spec: Spectrum, m: Measure, betas) -> np.ndarray:
    """Activation beta of each mode, refined from a scanning grid.

    A mode activates at the first grid beta where its weight exceeds
    ``ACTIVATION_EPS``; the crossing is then refined by bisection between
    the bracketing grid points.  Modes that never activate in the scanned
    range (including eigenvalue-one modes) report NaN; a mode already
    active at the first grid point reports that grid value unrefined.
    """
    betas = np.asarray(betas, dtype=float)
    if betas.ndim != 1 or betas.size < 2 or np.any(np.diff(betas) <= 0):
        raise OutOfRange("betas must be a strictly increasing grid")
    u_grid = solve_spectrum_grid(spec, m, betas)
    out = np.full(spec.n_modes, np.nan)
    for i in range(spec.n_modes):
        hits = np.flatnonzero(u_grid[:, i] > ACTIVATION_EPS)
        if hits.size == 0:
            continue
        j = int(hits[0])
        if j == 0:
            out[i] = betas[0]
            continue
        lo, hi = betas[j - 1], betas[j]
        lam = float(spec.lambdas[i])
        while hi - lo > TRANSITION_REL_TOL * hi:
            mid = 0.5 * (lo + hi)
            if _mode_weight(lam, m, mid) > ACTIVATION_EPS:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out
