"""Closed-form correlation measures for Gaussian pairs.

Three measures are supported: Shannon information, the Renyi family of
order q, and Jeffreys (symmetrized-KL) information.  Every quantity is
computed in nats.  For cross-validation each measure has two independent
formula paths: a main path driven by the eigenvalues of the normalized
regression matrix, and a second path working directly on the block
covariance (full determinant form for Renyi, symmetrized KL for Jeffreys).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaussib.errors import (
    DegenerateMode,
    DivergentInformation,
    NonPositiveDefinite,
    OutOfRange,
)
from gaussib.model import TOL_EIG, TOL_ZERO_LAMBDA, JointGaussian, Spectrum

# |q - 1| below this routes Renyi evaluations to the exact Shannon branch.
TOL_Q_ONE = 1e-6

_TAGS = ("shannon", "renyi", "jeffreys")


@dataclass(frozen=True)
class Measure:
    """Tagged choice of correlation measure.

    ``tag`` is one of ``shannon``, ``renyi``, ``jeffreys``; ``q`` is the
    Renyi order and must be given exactly when ``tag == "renyi"``.  The
    solver theory covers q in [0, 2]; orders outside that range are
    rejected here.
    """

    tag: str
    q: float | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise OutOfRange(f"unknown measure tag {self.tag!r}")
        if self.tag == "renyi":
            if self.q is None:
                raise OutOfRange("renyi measure requires an order q")
            q = float(self.q)
            if not np.isfinite(q) or q < 0.0 or q > 2.0:
                raise OutOfRange(f"renyi order q={q} outside the supported [0, 2]")
            object.__setattr__(self, "q", q)
        elif self.q is not None:
            raise OutOfRange(f"measure {self.tag!r} does not take an order q")

    @classmethod
    def shannon(cls) -> "Measure":
        return cls("shannon")

    @classmethod
    def renyi(cls, q: float) -> "Measure":
        return cls("renyi", q)

    @classmethod
    def jeffreys(cls) -> "Measure":
        return cls("jeffreys")

    @property
    def is_shannon_like(self) -> bool:
        """True for Shannon proper and for Renyi orders within TOL_Q_ONE of 1."""
        return self.tag == "shannon" or (
            self.tag == "renyi" and abs(self.q - 1.0) < TOL_Q_ONE
        )

    def label(self) -> str:
        if self.tag == "renyi":
            return f"renyi_q{self.q:g}"
        return self.tag


def _as_lambdas(source) -> np.ndarray:
    """Eigenvalues of the normalized regression matrix from flexible input.

    Accepts a Spectrum, a 1-D vector of eigenvalues, or the 2-D regression
    matrix itself (generally non-symmetric; its eigenvalues are real and in
    [0, 1] for valid models).
    """
    if isinstance(source, Spectrum):
        return source.lambdas
    arr = np.asarray(source, dtype=float)
    if arr.ndim == 1:
        lam = arr
    elif arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        ev = np.linalg.eigvals(arr)
        if np.abs(ev.imag).max(initial=0.0) > 1e-8:
            raise OutOfRange("regression matrix has complex eigenvalues")
        lam = np.sort(ev.real)
    else:
        raise OutOfRange("expected a Spectrum, an eigenvalue vector, or a square matrix")
    if lam.size == 0:
        raise OutOfRange("empty eigenvalue set")
    if np.any(lam < -TOL_EIG) or np.any(lam > 1.0 + TOL_EIG):
        raise OutOfRange("eigenvalues must lie in [0, 1]")
    lam = np.clip(lam, 0.0, 1.0)
    if np.any(lam < TOL_ZERO_LAMBDA):
        raise DegenerateMode("zero eigenvalue: information diverges")
    return lam


def shannon_info(source) -> float:
    """Shannon mutual information of the pair, ``-0.5 * sum(log lambda_i)``.

    ``source`` may be a JointGaussian (computed from block log-determinants),
    a Spectrum, an eigenvalue vector, or the regression matrix.
    """
    if isinstance(source, JointGaussian):
        sign_f, ld_full = np.linalg.slogdet(source.block_covariance())
        sign_x, ld_x = np.linalg.slogdet(source.sigma_x)
        sign_y, ld_y = np.linalg.slogdet(source.sigma_y)
        if min(sign_f, sign_x, sign_y) <= 0:
            raise NonPositiveDefinite("covariance log-determinant undefined")
        return 0.5 * (ld_x + ld_y - ld_full)
    lam = _as_lambdas(source)
    return float(-0.5 * np.sum(np.log(lam)))


def renyi_info_regression(source, q: float) -> float:
    """Renyi q-information from the regression-matrix eigenvalues.

    Evaluates ``-(1/(2 qbar)) * sum(qbar*log(lam) - log(1 - qbar^2*(1-lam)))``
    with ``qbar = 1 - q``.  Orders within TOL_Q_ONE of 1 use the exact
    Shannon limit; q = 0 returns 0 (the limiting value).  Divergence is
    possible only for q > 2, where the log argument can reach zero.
    """
    q = float(q)
    if not np.isfinite(q) or q < 0.0:
        raise OutOfRange(f"renyi order must be nonnegative, got {q}")
    lam = _as_lambdas(source)
    if q == 0.0:
        return 0.0
    if abs(q - 1.0) < TOL_Q_ONE:
        return float(-0.5 * np.sum(np.log(lam)))
    qbar = 1.0 - q
    args = -qbar * qbar * (1.0 - lam)
    if np.any(1.0 + args <= 0.0):
        raise DivergentInformation(
            f"q-information of order {q} diverges for this spectrum"
        )
    terms = qbar * np.log(lam) - np.log1p(args)
    return float(-np.sum(terms) / (2.0 * qbar))


def renyi_info_determinant(j: JointGaussian, q: float) -> float:
    """Renyi q-information from the full block covariance.

    Independent of the regression-matrix path: works with the joint
    covariance ``S`` and its decoupled version ``Sbar`` through
    ``(1/(q-1)) ln [ |q inv(S) + (1-q) inv(Sbar)|^{-1/2}
    / (|S|^{q/2} |Sbar|^{(1-q)/2}) ]``.  Orders within TOL_Q_ONE of 1 fall
    back to the forward KL between the joint and the product of marginals,
    which is still a block-covariance computation.
    """
    q = float(q)
    if not np.isfinite(q) or q <= 0.0:
        raise OutOfRange(f"determinant form requires q > 0, got {q}")
    full = j.block_covariance()
    bar = j.decoupled_covariance()
    if abs(q - 1.0) < TOL_Q_ONE:
        mu = np.concatenate([j.mean_x, j.mean_y])
        return gaussian_kl(mu, full, mu, bar)

    inv_full = np.linalg.inv(full)
    inv_bar = np.linalg.inv(bar)
    blend = q * inv_full + (1.0 - q) * inv_bar
    blend = 0.5 * (blend + blend.T)
    w = np.linalg.eigvalsh(blend)
    if w[0] <= 0.0:
        raise DivergentInformation(
            f"blended precision matrix not positive-definite at q={q}"
        )
    ld_blend = float(np.sum(np.log(w)))
    _, ld_full = np.linalg.slogdet(full)
    _, ld_bar = np.linalg.slogdet(bar)
    return (-0.5 * ld_blend - 0.5 * q * ld_full - 0.5 * (1.0 - q) * ld_bar) / (q - 1.0)


def jeffreys_info(source) -> float:
    """Jeffreys information, ``0.5 * tr(S_x inv(S_xgy) - I)``.

    For a JointGaussian the trace form is evaluated directly; a Spectrum or
    eigenvalue vector uses the equivalent ``0.5 * sum(1/lambda_i - 1)``.
    """
    if isinstance(source, JointGaussian):
        from gaussib.model import conditional_covariance

        cond = conditional_covariance(source)
        try:
            solved = np.linalg.solve(cond, source.sigma_x)
        except np.linalg.LinAlgError as exc:
            raise DegenerateMode("conditional covariance is singular") from exc
        return float(0.5 * (np.trace(solved) - source.n_x))
    lam = _as_lambdas(source)
    return float(0.5 * np.sum(1.0 / lam - 1.0))


def gaussian_kl(mean0, cov0, mean1, cov1) -> float:
    """KL divergence between two multivariate Gaussians, in nats."""
    mean0 = np.asarray(mean0, float)
    mean1 = np.asarray(mean1, float)
    cov0 = np.asarray(cov0, float)
    cov1 = np.asarray(cov1, float)
    n = mean0.size
    try:
        chol1 = np.linalg.cholesky(cov1)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite("second covariance is not PD") from exc
    sign0, ld0 = np.linalg.slogdet(cov0)
    if sign0 <= 0:
        raise NonPositiveDefinite("first covariance is not PD")
    ld1 = 2.0 * float(np.sum(np.log(np.diag(chol1))))
    half = np.linalg.solve(chol1, cov0)
    trace_term = float(np.sum(np.linalg.solve(chol1, half.T).diagonal()))
    diff = mean1 - mean0
    maha = float(np.sum(np.linalg.solve(chol1, diff) ** 2))
    return 0.5 * (trace_term + maha - n + ld1 - ld0)


def jeffreys_info_symmetrized_kl(j: JointGaussian) -> float:
    """Jeffreys information as the average of the two KL directions.

    Both KL divergences between the joint distribution and the product of
    marginals are evaluated independently through the general Gaussian KL
    formula; this is the verification path for :func:`jeffreys_info`.
    """
    mu = np.concatenate([j.mean_x, j.mean_y])
    full = j.block_covariance()
    bar = j.decoupled_covariance()
    forward = gaussian_kl(mu, full, mu, bar)
    reverse = gaussian_kl(mu, bar, mu, full)
    return 0.5 * (forward + reverse)
