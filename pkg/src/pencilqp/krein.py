"""Finite-dimensional Krein spaces and the regularization operator ``Lx = (Tx, Vx)``.

A Krein space is represented by an invertible symmetric Gram matrix ``J`` with
``[x, y] = (Jx)ᵀy``. The domain of ``T`` and ``V`` is always Euclidean.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from . import spectral
from .config import DEFAULT_TOL, ToleranceConfig, problem_scale
from .errors import (
    DefiniteTTWarning,
    DimensionMismatch,
    InconsistentChecks,
    RhoZero,
    SingularGram,
    VNotIndefinite,
)
from .pencil import Pencil, PositivityInterval, positivity_interval
from .spectral import PSDStatus

PSEUDO_REGULAR_NOTE = "pseudo-regular holds automatically in finite dimension"


@dataclass(frozen=True, eq=False)
class KreinSpace:
    J: np.ndarray

    def __post_init__(self):
        J = spectral.sym(self.J)
        w = spectral.eigvalsh(J)
        if np.min(np.abs(w)) <= DEFAULT_TOL.rank_tol * problem_scale(J):
            raise SingularGram("Gram matrix must be invertible")
        object.__setattr__(self, "J", J)

    @classmethod
    def from_signature(cls, signs) -> KreinSpace:
        return cls(np.diag(np.asarray(signs, dtype=float)))

    @classmethod
    def hilbert(cls, n: int) -> KreinSpace:
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.J.shape[0]

    def inner(self, x, y) -> float:
        return float(np.asarray(y) @ self.J @ np.asarray(x))


@dataclass(frozen=True, eq=False)
class ProductKreinSpace:
    """``K × E`` with ``[(y, z), (y', z')]_ρ = [y, y']_K + ρ[z, z']_E``."""

    K: KreinSpace
    E: KreinSpace
    rho: float

    def __post_init__(self):
        if self.rho == 0:
            raise RhoZero("the product inner product needs rho != 0")

    @property
    def gram(self) -> np.ndarray:
        return block_diag(self.K.J, self.rho * self.E.J)

    @property
    def space(self) -> KreinSpace:
        return KreinSpace(self.gram)


@dataclass(frozen=True, eq=False)
class RegularizationProblem:
    """Data of the constrained indefinite least-squares problem.

    Minimize ``[Tx - w0, Tx - w0]_K`` subject to ``[Vx - z0, Vx - z0]_E = 0``
    over Euclidean ``x``.
    """

    T: np.ndarray
    V: np.ndarray
    K: KreinSpace
    E: KreinSpace
    w0: np.ndarray
    z0: np.ndarray

    def __post_init__(self):
        T = np.atleast_2d(np.asarray(self.T, dtype=float))
        V = np.atleast_2d(np.asarray(self.V, dtype=float))
        w0 = np.asarray(self.w0, dtype=float).ravel()
        z0 = np.asarray(self.z0, dtype=float).ravel()
        if T.shape[1] != V.shape[1]:
            raise DimensionMismatch(f"T has {T.shape[1]} columns, V has {V.shape[1]}")
        if self.K.n != T.shape[0] or w0.size != T.shape[0]:
            raise DimensionMismatch("T, J_K and w0 disagree on the dimension of K")
        if self.E.n != V.shape[0] or z0.size != V.shape[0]:
            raise DimensionMismatch("V, J_E and z0 disagree on the dimension of E")
        for name, val in (("T", T), ("V", V), ("w0", w0), ("z0", z0)):
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.T.shape[1]

    @property
    def TT(self) -> np.ndarray:
        """``T#T = Tᵀ J_K T``."""
        M = self.T.T @ self.K.J @ self.T
        return (M + M.T) / 2

    @property
    def VV(self) -> np.ndarray:
        M = self.V.T @ self.E.J @ self.V
        return (M + M.T) / 2

    @property
    def pencil(self) -> Pencil:
        return Pencil(self.TT, self.VV)

    @property
    def scale(self) -> float:
        return problem_scale(self.TT, self.VV)

    def rhs(self, rho: float) -> np.ndarray:
        """``T#w0 + ρ V#z0``."""
        return self.T.T @ self.K.J @ self.w0 + rho * self.V.T @ self.E.J @ self.z0


def krein_adjoint(T, frm: KreinSpace | None, to: KreinSpace | None) -> np.ndarray:
    """Adjoint of ``T: frm -> to`` with respect to the two Gram forms.

    ``T# = J_frm⁻¹ Tᵀ J_to``, so ``[Tx, y]_to = [x, T#y]_frm``. ``None`` stands
    for a Euclidean space.
    """
    T = np.atleast_2d(np.asarray(T, dtype=float))
    m, n = T.shape
    if frm is not None and frm.n != n:
        raise DimensionMismatch(f"T has {n} columns but the source space has dimension {frm.n}")
    if to is not None and to.n != m:
        raise DimensionMismatch(f"T has {m} rows but the target space has dimension {to.n}")
    Tt = T.T if to is None else T.T @ to.J
    return Tt if frm is None else np.linalg.solve(frm.J, Tt)


def build_L(T, V) -> np.ndarray:
    T = np.atleast_2d(np.asarray(T, dtype=float))
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if T.shape[1] != V.shape[1]:
        raise DimensionMismatch(f"T has {T.shape[1]} columns, V has {V.shape[1]}")
    return np.vstack([T, V])


def normal_operator(prob: RegularizationProblem, rho: float) -> np.ndarray:
    """``L#L = T#T + ρ V#V``, checked against the adjoint of ``L`` in ``K × E``."""
    if rho == 0:
        raise RhoZero("rho must be nonzero")
    M = prob.TT + rho * prob.VV
    L = build_L(prob.T, prob.V)
    LL = krein_adjoint(L, None, ProductKreinSpace(prob.K, prob.E, rho).space) @ L
    if np.linalg.norm(M - LL) > 1e-10 * max(1.0, np.linalg.norm(M)):
        raise InconsistentChecks("T#T + ρV#V differs from L#L")
    return M


@dataclass(frozen=True)
class SubspaceClassification:
    """Properties of ``R(L)`` inside ``(K × E, [·,·]_ρ)``.

    In finite dimension every subspace is closed and pseudo-regular, so
    ``regular`` coincides with ``nondegenerate``; both are still computed
    from different data and compared.
    """

    isotropic_dim: int
    nondegenerate: bool
    regular: bool
    nonnegative: bool
    uniformly_positive: bool
    note: str = PSEUDO_REGULAR_NOTE
    skipped: tuple = field(default=())

    @property
    def label(self) -> str:
        return "regular" if self.regular else "degenerate"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "isotropic_dim": self.isotropic_dim,
            "nondegenerate": self.nondegenerate,
            "regular": self.regular,
            "nonnegative": self.nonnegative,
            "uniformly_positive": self.uniformly_positive,
            "note": self.note,
            "skipped": list(self.skipped),
        }


def classify_range_of_L(
    prob: RegularizationProblem, rho: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> SubspaceClassification:
    """Classify ``R(L)`` and cross-check against criteria stated on ``L#L``.

    Primary criteria come from the Gram form restricted to an orthonormal
    basis of ``R(L)``. Independent checks:

    * isotropic dimension equals ``dim N(L#L) - dim(N(T) ∩ N(V))``;
    * if ``V`` is surjective, regularity matches ``R(T#) ⊆ R(L#L)`` and
      ``R(L#L) = N(T)⊥ + N(V)⊥``;
    * if ``N(T) ∩ N(V) = {0}``, uniform positivity matches ``L#L`` being
      positive definite.

    Raises :class:`InconsistentChecks` on any disagreement.
    """
    M = normal_operator(prob, rho)
    space = ProductKreinSpace(prob.K, prob.E, rho)
    G = space.gram
    L = build_L(prob.T, prob.V)
    N = L.shape[0]

    Q = spectral.range_basis(L, cfg.rank_tol * problem_scale(L))
    Gr = Q.T @ G @ Q
    wr = spectral.eigvalsh(Gr) if Q.shape[1] else np.zeros(0)
    thr = cfg.rank_tol * problem_scale(G)
    isotropic = int(np.sum(np.abs(wr) <= thr))
    nondegenerate = isotropic == 0
    Mperp = spectral.null_space(Q.T @ G, thr) if Q.shape[1] else np.eye(N)
    regular = spectral.rank(np.hstack([Q, Mperp]), np.sqrt(cfg.rank_tol)) == N
    nonnegative = bool(wr.size == 0 or wr[0] >= -thr)
    uniformly_positive = bool(nondegenerate and nonnegative)

    skipped = []
    scale = problem_scale(M, prob.TT, prob.VV)
    mthr = cfg.rank_tol * scale
    nullity_M = int(np.sum(np.abs(spectral.eigvalsh(M)) <= mthr))
    nullity_L = prob.n - spectral.rank(L, cfg.rank_tol * problem_scale(L))
    if nullity_M - nullity_L != isotropic:
        raise InconsistentChecks(
            f"isotropic dim {isotropic} but dim N(L#L) - dim N(L) = {nullity_M - nullity_L}"
        )
    if regular != nondegenerate:
        raise InconsistentChecks("regular and nondegenerate disagree in finite dimension")

    if spectral.rank(prob.V, cfg.rank_tol * problem_scale(prob.V)) == prob.V.shape[0]:
        Tsharp = krein_adjoint(prob.T, None, prob.K)
        by_inclusion = spectral.range_included(Tsharp, M, cfg)
        kernels_perp = np.hstack([prob.T.T, prob.V.T])
        by_sum = spectral.range_included(M, kernels_perp, cfg) and spectral.range_included(
            kernels_perp, M, cfg
        )
        if by_inclusion != regular or by_sum != regular:
            raise InconsistentChecks(
                f"regular={regular} but R(T#)⊆R(L#L) is {by_inclusion}, "
                f"R(L#L)=N(T)⊥+N(V)⊥ is {by_sum}"
            )
    else:
        skipped.append("V not surjective: range-inclusion regularity checks skipped")

    if nullity_L == 0:
        status, _ = spectral.psd_status(M, cfg, scale)
        if (status is PSDStatus.POSITIVE_DEFINITE) != uniformly_positive:
            raise InconsistentChecks(
                f"uniformly_positive={uniformly_positive} but L#L is {status.value}"
            )
    else:
        skipped.append("N(T) ∩ N(V) nontrivial: L#L definiteness check skipped")

    return SubspaceClassification(
        isotropic, nondegenerate, regular, nonnegative, uniformly_positive, skipped=tuple(skipped)
    )


def admissible_interval(
    prob: RegularizationProblem, cfg: ToleranceConfig = DEFAULT_TOL
) -> PositivityInterval:
    """Interval of ``ρ`` with ``T#T + ρV#V ⪰ 0``.

    Needs ``V#V`` indefinite. When ``T#T`` is indefinite too, a non-empty
    interval cannot contain 0; that is asserted. A definite ``T#T`` is
    accepted with a :class:`DefiniteTTWarning`.
    """
    scale = prob.scale
    vstatus, _ = spectral.psd_status(prob.VV, cfg, scale)
    if vstatus is not PSDStatus.INDEFINITE:
        raise VNotIndefinite(f"V#V is {vstatus.value}")
    tstatus, _ = spectral.psd_status(prob.TT, cfg, scale)
    interval = positivity_interval(prob.pencil, cfg)
    if tstatus is not PSDStatus.INDEFINITE:
        warnings.warn(f"T#T is {tstatus.value}, not indefinite", DefiniteTTWarning, stacklevel=2)
    elif interval.contains(0.0):
        raise InconsistentChecks("T#T is indefinite but 0 lies in the admissible interval")
    return interval
