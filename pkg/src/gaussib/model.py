"""Joint Gaussian pairs and the spectral decomposition driving every solver.

The central object is the normalized regression matrix ``S_xgy @ inv(S_x)``
(conditional covariance of X given Y, right-normalized by the covariance of
X).  Its eigenvalues lie in [0, 1] and fully determine all information
quantities and optimal encoders computed elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gaussib.errors import (
    DegenerateMode,
    NonPositiveDefinite,
    NumericalFailure,
    OutOfRange,
)

# Relative positive-definiteness tolerance (scaled by the largest eigenvalue).
TOL_PD = 1e-10
# Absolute tolerance for eigenvalue range / residual checks.
TOL_EIG = 1e-10
# Eigenvalues below this imply a deterministic X-Y dependence and are rejected.
TOL_ZERO_LAMBDA = 1e-12


def _as_matrix(a, name: str) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise OutOfRange(f"{name} must be a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise OutOfRange(f"{name} contains non-finite entries")
    return m


def _check_symmetric(m: np.ndarray, name: str) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise OutOfRange(f"{name} must be square, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > 1e-8 * scale:
        raise OutOfRange(f"{name} is not symmetric")
    return 0.5 * (m + m.T)


def _check_positive_definite(m: np.ndarray, name: str) -> None:
    eigvals = np.linalg.eigvalsh(m)
    if eigvals[-1] <= 0 or eigvals[0] <= TOL_PD * eigvals[-1]:
        raise NonPositiveDefinite(
            f"{name} is not positive-definite (min eigenvalue {eigvals[0]:.3e})"
        )


@dataclass(frozen=True)
class JointGaussian:
    """A correlated Gaussian pair (X, Y) described by its block covariance.

    Parameters
    ----------
    sigma_x, sigma_y : ndarray
        Symmetric positive-definite marginal covariances.
    sigma_xy : ndarray
        Cross covariance, shape ``(n_x, n_y)``.
    mean_x, mean_y : ndarray, optional
        Marginal means; default to zero vectors.

    Raises
    ------
    NonPositiveDefinite
        If either marginal or the full block covariance fails its
        positive-definiteness check, or the implied conditional covariance
        of X given Y is not positive-semidefinite.
    """

    sigma_x: np.ndarray
    sigma_y: np.ndarray
    sigma_xy: np.ndarray
    mean_x: np.ndarray = field(default=None)  # type: ignore[assignment]
    mean_y: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        sx = _check_symmetric(_as_matrix(self.sigma_x, "sigma_x"), "sigma_x")
        sy = _check_symmetric(_as_matrix(self.sigma_y, "sigma_y"), "sigma_y")
        sxy = _as_matrix(self.sigma_xy, "sigma_xy")
        nx, ny = sx.shape[0], sy.shape[0]
        if sxy.shape != (nx, ny):
            raise OutOfRange(
                f"sigma_xy must have shape ({nx}, {ny}), got {sxy.shape}"
            )
        mx = np.zeros(nx) if self.mean_x is None else np.asarray(self.mean_x, float)
        my = np.zeros(ny) if self.mean_y is None else np.asarray(self.mean_y, float)
        if mx.shape != (nx,) or my.shape != (ny,):
            raise OutOfRange("mean vectors do not match covariance dimensions")

        _check_positive_definite(sx, "sigma_x")
        _check_positive_definite(sy, "sigma_y")
        full = np.block([[sx, sxy], [sxy.T, sy]])
        _check_positive_definite(full, "the block covariance")

        object.__setattr__(self, "sigma_x", sx)
        object.__setattr__(self, "sigma_y", sy)
        object.__setattr__(self, "sigma_xy", sxy)
        object.__setattr__(self, "mean_x", mx)
        object.__setattr__(self, "mean_y", my)

        # Conditional covariance must be PSD; PD of the block guarantees it
        # mathematically, so only numerical noise can trip this.
        cond = conditional_covariance(self)
        w = np.linalg.eigvalsh(cond)
        if w[0] < -TOL_PD * max(1.0, w[-1]):
            raise NonPositiveDefinite(
                "implied conditional covariance of X given Y is not PSD"
            )

    @property
    def n_x(self) -> int:
        return self.sigma_x.shape[0]

    @property
    def n_y(self) -> int:
        return self.sigma_y.shape[0]

    def block_covariance(self) -> np.ndarray:
        """Full covariance of the stacked vector (X, Y)."""
        return np.block([[self.sigma_x, self.sigma_xy],
                         [self.sigma_xy.T, self.sigma_y]])

    def decoupled_covariance(self) -> np.ndarray:
        """Block covariance with the cross blocks zeroed (independent X, Y)."""
        out = np.zeros((self.n_x + self.n_y, self.n_x + self.n_y))
        out[: self.n_x, : self.n_x] = self.sigma_x
        out[self.n_x:, self.n_x:] = self.sigma_y
        return out


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of the normalized regression matrix.

    ``lambdas`` are the eigenvalues (ascending, each in [0, 1]), ``v_rows``
    holds unit-norm left (row) eigenvectors, and ``r_values`` is the diagonal
    of ``V @ sigma_x @ V.T`` (positive conditioning weights).
    """

    lambdas: np.ndarray
    v_rows: np.ndarray
    r_values: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        v = np.asarray(self.v_rows, dtype=float)
        r = np.asarray(self.r_values, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise OutOfRange("lambdas must be a nonempty 1-D vector")
        if v.shape != (lam.size, v.shape[1] if v.ndim == 2 else -1) or v.ndim != 2:
            raise OutOfRange("v_rows must be a matrix with one row per mode")
        if r.shape != lam.shape:
            raise OutOfRange("r_values must match lambdas in length")
        if np.any(lam < -TOL_EIG) or np.any(lam > 1.0 + TOL_EIG):
            raise OutOfRange("eigenvalues must lie in [0, 1]")
        if np.any(lam < TOL_ZERO_LAMBDA):
            raise DegenerateMode(
                "eigenvalue numerically zero: deterministic mode rejected"
            )
        if np.any(np.diff(lam) < -TOL_EIG):
            raise OutOfRange("lambdas must be sorted ascending")
        if np.any(r <= 0):
            raise OutOfRange("r_values must be positive")
        object.__setattr__(self, "lambdas", np.clip(lam, 0.0, 1.0))
        object.__setattr__(self, "v_rows", v)
        object.__setattr__(self, "r_values", r)

    @property
    def n_modes(self) -> int:
        return self.lambdas.size

    @property
    def lambda_min(self) -> float:
        return float(self.lambdas[0])


def conditional_covariance(j: JointGaussian) -> np.ndarray:
    """Covariance of X given Y: ``sigma_x - sigma_xy inv(sigma_y) sigma_yx``.

    Returns a symmetrized matrix; raises NonPositiveDefinite if sigma_y
    cannot be Cholesky-factorized.
    """
    try:
        chol = np.linalg.cholesky(j.sigma_y)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite("sigma_y failed Cholesky factorization") from exc
    # half = inv(L) @ sigma_yx, so that half.T @ half = sigma_xy inv(sigma_y) sigma_yx
    half = np.linalg.solve(chol, j.sigma_xy.T)
    cond = j.sigma_x - half.T @ half
    return 0.5 * (cond + cond.T)


def _inverse_sqrt(sym: np.ndarray, name: str) -> np.ndarray:
    w, q = np.linalg.eigh(sym)
    if w[0] <= TOL_PD * max(1.0, w[-1]):
        raise NonPositiveDefinite(f"{name} is numerically singular")
    return (q / np.sqrt(w)) @ q.T


def spectrum(j: JointGaussian) -> Spectrum:
    """Eigenvalues and left eigenvectors of the normalized regression matrix.

    The raw matrix ``S_xgy @ inv(S_x)`` is not symmetric, so the eigenproblem
    is solved on the similar symmetric matrix
    ``inv_sqrt(S_x) @ S_xgy @ inv_sqrt(S_x)`` and the orthonormal
    eigenvectors are mapped back to left eigenvectors, which are then
    rescaled to unit Euclidean norm.

    Raises
    ------
    DegenerateMode
        If any eigenvalue is numerically zero.
    NumericalFailure
        If the symmetric eigensolver fails or an eigenvalue falls outside
        [0, 1] by more than the tolerance.
    """
    cond = conditional_covariance(j)
    isq = _inverse_sqrt(j.sigma_x, "sigma_x")
    sym = isq @ cond @ isq
    sym = 0.5 * (sym + sym.T)
    try:
        lam, q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("symmetrized eigenproblem did not converge") from exc

    if lam[0] < -TOL_EIG or lam[-1] > 1.0 + TOL_EIG:
        raise NumericalFailure(
            f"eigenvalues outside [0, 1] beyond tolerance: [{lam[0]}, {lam[-1]}]"
        )
    if np.any(lam < TOL_ZERO_LAMBDA):
        raise DegenerateMode(
            "deterministic mode (eigenvalue ~ 0); unbounded encoder weight"
        )
    lam = np.clip(lam, 0.0, 1.0)

    # Left eigenvectors of S_xgy inv(S_x): rows of Q.T @ inv_sqrt(S_x).
    # eigh returns eigenvalues ascending; a stable re-sort keeps tie order.
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = (q.T @ isq)[order]

    norms = np.linalg.norm(v, axis=1)
    v = v / norms[:, None]
    # Deterministic sign: largest-magnitude component of each row positive.
    lead = np.argmax(np.abs(v), axis=1)
    signs = np.sign(v[np.arange(v.shape[0]), lead])
    v = v * signs[:, None]
    r = np.einsum("ij,jk,ik->i", v, j.sigma_x, v)
    return Spectrum(lambdas=lam, v_rows=v, r_values=r)


def spectrum_from_eigenvalues(lambdas, r_values=None) -> Spectrum:
    """Build a diagonal-model Spectrum directly from eigenvalues.

    Equivalent to a model with ``sigma_x = diag(r)`` and conditional
    covariance ``diag(lambdas * r)``; the eigenvector matrix is the identity.
    Each eigenvalue must lie in (0, 1].
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lam.size == 0:
        raise OutOfRange("at least one eigenvalue is required")
    if np.any(~np.isfinite(lam)) or np.any(lam <= 0.0) or np.any(lam > 1.0):
        raise OutOfRange("eigenvalues must lie in (0, 1]")
    if r_values is None:
        r = np.ones_like(lam)
    else:
        r = np.atleast_1d(np.asarray(r_values, dtype=float))
        if r.shape != lam.shape:
            raise OutOfRange("r_values must match eigenvalues in length")
        if np.any(r <= 0):
            raise OutOfRange("r_values must be positive")
    order = np.argsort(lam, kind="stable")
    return Spectrum(lambdas=lam[order], v_rows=np.eye(lam.size)[order],
                    r_values=r[order])
