"""Noisy linear Gaussian channels and the informations they induce.

The encoder is ``T = A X + xi`` with standard-normal noise.  Informations
with the source X and the target Y have closed forms in two parametrizations:
a dense matrix A (any shape), and per-mode reduced weights ``u_i`` living in
the eigenbasis of the normalized regression matrix.  Both are implemented
and must agree; the weight form is what the solvers produce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaussib.errors import DivergentInformation, OutOfRange
from gaussib.measures import Measure
from gaussib.model import JointGaussian, Spectrum, conditional_covariance


@dataclass(frozen=True)
class LinearEncoder:
    """Gaussian channel ``T = A X + xi`` with identity noise covariance.

    A zero-row matrix is the distinguished empty encoder (no active modes);
    all its informations are zero.
    """

    a_matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a_matrix, dtype=float)
        if a.ndim != 2:
            raise OutOfRange("encoder matrix must be 2-D")
        if not np.all(np.isfinite(a)):
            raise OutOfRange("encoder matrix must be finite")
        object.__setattr__(self, "a_matrix", a)

    @classmethod
    def empty(cls, n_x: int) -> "LinearEncoder":
        return cls(np.zeros((0, n_x)))

    @property
    def n_t(self) -> int:
        return self.a_matrix.shape[0]

    @property
    def n_x(self) -> int:
        return self.a_matrix.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.n_t == 0


@dataclass(frozen=True)
class MixingSolution:
    """Per-mode reduced weights for a given measure and tradeoff parameter.

    ``u_values[i] >= 0`` is the weight of spectrum mode i; ``active`` flags
    the strictly positive entries.  Produced by ``solver.solve_spectrum``.
    """

    u_values: np.ndarray
    beta: float
    measure: Measure
    active: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u_values, dtype=float)
        act = np.asarray(self.active, dtype=bool)
        if u.ndim != 1 or act.shape != u.shape:
            raise OutOfRange("u_values and active must be matching vectors")
        if np.any(u < 0) or not np.all(np.isfinite(u)):
            raise OutOfRange("mode weights must be finite and nonnegative")
        if np.any(act != (u > 0.0)):
            raise OutOfRange("active flags inconsistent with weights")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise OutOfRange("beta must be a positive real")
        object.__setattr__(self, "u_values", u)
        object.__setattr__(self, "active", act)

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active))


def prewhiten(a_matrix, noise_cov) -> LinearEncoder:
    """Reduce a channel with noise covariance ``noise_cov`` to identity noise.

    ``T = A X + xi`` with ``xi ~ N(0, noise_cov)`` carries the same
    information as ``T' = inv(L) T`` with standard noise, where
    ``noise_cov = L L^T``.  Returns the equivalent identity-noise encoder.
    """
    a = np.asarray(a_matrix, dtype=float)
    noise = np.asarray(noise_cov, dtype=float)
    try:
        chol = np.linalg.cholesky(noise)
    except np.linalg.LinAlgError as exc:
        raise OutOfRange("noise covariance must be positive-definite") from exc
    return LinearEncoder(np.linalg.solve(chol, a))


def _logdet_pd(m: np.ndarray, context: str) -> float:
    sign, ld = np.linalg.slogdet(m)
    if sign <= 0:
        raise DivergentInformation(f"{context}: matrix not positive-definite")
    return float(ld)


def encoder_info_source(a: LinearEncoder, j: JointGaussian, m: Measure) -> float:
    """Information the channel output carries about the source X."""
    if a.is_empty:
        return 0.0
    if a.n_x != j.n_x:
        raise OutOfRange("encoder width does not match model dimension")
    gram = a.a_matrix @ j.sigma_x @ a.a_matrix.T
    eye = np.eye(a.n_t)
    if m.tag == "jeffreys":
        return float(0.5 * np.trace(gram))
    if m.is_shannon_like:
        return 0.5 * _logdet_pd(eye + gram, "source information")
    qbar = 1.0 - m.q
    ld_full = _logdet_pd(eye + gram, "source information")
    ld_blend = _logdet_pd(eye + (1.0 - qbar * qbar) * gram, "source information")
    return -(m.q * ld_full - ld_blend) / (2.0 * qbar)


def encoder_info_target(a: LinearEncoder, j: JointGaussian, m: Measure) -> float:
    """Information the channel output carries about the target Y."""
    if a.is_empty:
        return 0.0
    if a.n_x != j.n_x:
        raise OutOfRange("encoder width does not match model dimension")
    cond = conditional_covariance(j)
    gram_x = a.a_matrix @ j.sigma_x @ a.a_matrix.T
    gram_c = a.a_matrix @ cond @ a.a_matrix.T
    eye = np.eye(a.n_t)
    if m.tag == "jeffreys":
        solved = np.linalg.solve(eye + gram_c, eye + gram_x)
        return float(0.5 * (np.trace(solved) - a.n_t))
    if m.is_shannon_like:
        return 0.5 * (
            _logdet_pd(eye + gram_x, "target information")
            - _logdet_pd(eye + gram_c, "target information")
        )
    qbar = 1.0 - m.q
    blend = (1.0 - qbar * qbar) * gram_x + qbar * qbar * gram_c
    ld_cond = _logdet_pd(eye + gram_c, "target information")
    ld_full = _logdet_pd(eye + gram_x, "target information")
    ld_blend = _logdet_pd(eye + blend, "target information")
    return -(qbar * ld_cond + m.q * ld_full - ld_blend) / (2.0 * qbar)


def encoder_from_solution(s: MixingSolution, spec: Spectrum) -> LinearEncoder:
    """Materialize the mixing solution as a dense encoder matrix.

    Active modes map to rows ``sqrt(u_i / r_i) * v_i``; inactive modes are
    truncated, so the output dimension equals the active count.  With no
    active modes the distinguished empty encoder is returned.
    """
    if s.u_values.shape[0] != spec.n_modes:
        raise OutOfRange("solution and spectrum mode counts differ")
    idx = np.flatnonzero(s.active)
    if idx.size == 0:
        return LinearEncoder.empty(spec.v_rows.shape[1])
    w = np.sqrt(s.u_values[idx] / spec.r_values[idx])
    return LinearEncoder(w[:, None] * spec.v_rows[idx])


def information_sums(u_values, lambdas, m: Measure) -> tuple[float, float]:
    """Per-mode closed-form informations for reduced weights ``u``.

    Returns ``(omega_tx, omega_ty)`` summed over modes.  ``u_values`` may be
    1-D (one solution) or 2-D with modes on the last axis, in which case the
    sums broadcast over leading axes and a pair of arrays is returned.
    """
    u = np.asarray(u_values, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    if np.any(u < 0):
        raise OutOfRange("mode weights must be nonnegative")
    if m.tag == "jeffreys":
        tx = 0.5 * np.sum(u, axis=-1)
        ty = 0.5 * np.sum(u * (1.0 - lam) / (1.0 + lam * u), axis=-1)
    elif m.is_shannon_like:
        tx = 0.5 * np.sum(np.log1p(u), axis=-1)
        ty = 0.5 * np.sum(np.log1p(u) - np.log1p(lam * u), axis=-1)
    else:
        qbar = 1.0 - m.q
        c_x = 1.0 - qbar * qbar
        c_y = 1.0 - qbar * qbar * (1.0 - lam)
        if np.any(1.0 + c_y * u <= 0.0) or np.any(1.0 + c_x * u <= 0.0):
            raise DivergentInformation("weight outside the convergent region")
        tx = -(m.q * np.log1p(u) - np.log1p(c_x * u)).sum(axis=-1) / (2.0 * qbar)
        ty = -(
            qbar * np.log1p(lam * u) + m.q * np.log1p(u) - np.log1p(c_y * u)
        ).sum(axis=-1) / (2.0 * qbar)
    if u.ndim == 1:
        return float(tx), float(ty)
    return tx, ty


def solution_info(s: MixingSolution, spec: Spectrum, m: Measure) -> tuple[float, float]:
    """Informations ``(omega_tx, omega_ty)`` of a mixing solution.

    Uses the per-mode sums; agrees with ``encoder_info_source`` /
    ``encoder_info_target`` evaluated on ``encoder_from_solution``.
    """
    if s.u_values.shape[0] != spec.n_modes:
        raise OutOfRange("solution and spectrum mode counts differ")
    return information_sums(s.u_values, spec.lambdas, m)
