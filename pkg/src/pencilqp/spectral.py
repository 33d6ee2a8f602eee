"""Dense symmetric linear algebra with tolerance-governed rank decisions.

The symmetric eigendecomposition is the single primitive here: PSD tests
and matrix functions are read off ``numpy.linalg.eigh``.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig, problem_scale
from .errors import DimensionMismatch, NonConvergence, NotPSD, NotSymmetric


class EigenDecomp(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


class PSDStatus(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"
    NEGATIVE_SEMIDEFINITE = "NegativeSemidefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"

    @property
    def is_psd(self) -> bool:
        return self in (PSDStatus.POSITIVE_DEFINITE, PSDStatus.POSITIVE_SEMIDEFINITE)

    @property
    def is_semidefinite(self) -> bool:
        return self is not PSDStatus.INDEFINITE


def sym(M, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Validate a square matrix as symmetric and return its exact symmetrization.

    Raises
    ------
    NotSymmetric
        If some ``|M[i, j] - M[j, i]|`` exceeds ``sym_tol * max(1, max|M|)``.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    bound = cfg.sym_tol * max(1.0, float(np.max(np.abs(M))))
    gap = np.max(np.abs(0.5 * M - 0.5 * M.T))
    if 2 * gap > bound:
        raise NotSymmetric(f"asymmetry {2 * gap:.3e} exceeds {bound:.3e}")
    # halves first so entries near the float maximum do not overflow
    return np.where(M == M.T, M, 0.5 * M + 0.5 * M.T)


def eig(M) -> EigenDecomp:
    """Eigenvalues ascending, with orthonormal eigenvectors as columns."""
    M = np.asarray(M, dtype=float)
    try:
        w, V = np.linalg.eigh((M + M.T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return EigenDecomp(w, V)


def eigvalsh(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    try:
        return np.linalg.eigvalsh((M + np.swapaxes(M, -1, -2)) / 2)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc


def classify_eigenvalues(lo: float, hi: float, thresh: float) -> PSDStatus:
    if lo > thresh:
        return PSDStatus.POSITIVE_DEFINITE
    if lo >= -thresh:
        return PSDStatus.POSITIVE_SEMIDEFINITE
    if hi < -thresh:
        return PSDStatus.NEGATIVE_DEFINITE
    if hi <= thresh:
        return PSDStatus.NEGATIVE_SEMIDEFINITE
    return PSDStatus.INDEFINITE


def psd_status(M, cfg: ToleranceConfig = DEFAULT_TOL, scale: float | None = None):
    """Classify ``M`` by its extreme eigenvalues against ``±psd_tol * scale``.

    Returns ``(status, min_eigenvalue)``. The default scale is ``max(1, ||M||_F)``;
    pencil code passes the scale of the whole problem instead. A zero matrix
    counts as positive semidefinite.
    """
    M = sym(M, cfg)
    if scale is None:
        scale = problem_scale(M)
    w = eigvalsh(M)
    return classify_eigenvalues(w[0], w[-1], cfg.psd_tol * scale), float(w[0])


def sqrt_psd(M, cfg: ToleranceConfig = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Principal square root of a PSD matrix.

    Negative eigenvalues no smaller than ``-psd_tol * scale`` are rounding noise
    and are clamped to zero, as are positive ones below ``rank_tol * scale``;
    otherwise noise of size ``ε`` would reappear as ``√ε`` in the root and
    enlarge its numerical range. The residual ``||R² - M||`` stays below
    ``rank_tol * scale``.
    """
    M = sym(M, cfg)
    if scale is None:
        scale = problem_scale(M)
    w, V = eig(M)
    if w[0] < -cfg.psd_tol * scale:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -{cfg.psd_tol * scale:.3e}")
    r = np.where(w > cfg.rank_tol * scale, np.sqrt(np.clip(w, 0.0, None)), 0.0)
    R = (V * r) @ V.T
    return (R + R.T) / 2


def inv_sqrt_pd(M, cfg: ToleranceConfig = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """``M^{-1/2}`` for positive definite ``M``; raises :class:`NotPSD` otherwise."""
    M = sym(M, cfg)
    if scale is None:
        scale = problem_scale(M)
    w, V = eig(M)
    if w[0] <= cfg.psd_tol * scale:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} is not above {cfg.psd_tol * scale:.3e}")
    S = (V / np.sqrt(w)) @ V.T
    return (S + S.T) / 2


def pinv(M, cfg: ToleranceConfig = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a symmetric matrix.

    Eigenvalues with ``|value| <= rank_tol * scale`` are treated as zero.
    """
    M = sym(M, cfg)
    if scale is None:
        scale = problem_scale(M)
    w, V = eig(M)
    keep = np.abs(w) > cfg.rank_tol * scale
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    P = (V * inv) @ V.T
    return (P + P.T) / 2


def rank(M, thresh: float) -> int:
    """Numerical rank: number of singular values above the absolute ``thresh``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > thresh))


def null_space(M, thresh: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of any matrix."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n)
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > thresh))
    return Vt[r:].T.copy()


def range_basis(M, thresh: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical column space."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > thresh))
    return U[:, :r].copy()


def joint_kernel(A, B, thresh: float) -> np.ndarray:
    """Orthonormal basis of ``N(A) ∩ N(B)``."""
    return null_space(np.vstack([A, B]), thresh)


def orth_complement(Q: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(Q)`` in R^n."""
    if Q.size == 0:
        return np.eye(n)
    return null_space(Q.T, 0.5)


def subspace_distance(P: np.ndarray, Q: np.ndarray) -> float:
    """Spectral-norm distance between the orthogonal projectors onto ``span(P)`` and ``span(Q)``."""
    if P.shape[1] != Q.shape[1]:
        return 1.0
    if P.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(P @ P.T - Q @ Q.T, 2))


def range_included(Bm, Am, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ``R(Bm) ⊆ R(Am)``, tested as ``rank([Am | Bm]) == rank(Am)``.

    This is the finite-dimensional form of Douglas' range-inclusion criterion.
    Both ranks use the absolute threshold ``rank_tol * max(1, ||Am||_F, ||Bm||_F)``.
    """
    Am = np.asarray(Am, dtype=float)
    Bm = np.asarray(Bm, dtype=float)
    if Am.ndim == 1:
        Am = Am[:, None]
    if Bm.ndim == 1:
        Bm = Bm[:, None]
    if Am.shape[0] != Bm.shape[0]:
        raise DimensionMismatch(f"row dimensions differ: {Am.shape[0]} vs {Bm.shape[0]}")
    thresh = cfg.rank_tol * problem_scale(Am, Bm)
    return rank(np.hstack([Am, Bm]), thresh) == rank(Am, thresh)
