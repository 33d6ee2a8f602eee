"""Range of positiveness of a linear pencil ``P(λ) = A + λB``.

The set ``I≥(A, B)`` of parameters making ``A + λB`` positive semidefinite is
a closed interval ``[λ₋, λ₊]`` (possibly empty or a single point) whenever
``B`` is indefinite. It is computed from the concave function
``f(λ) = λ_min(A + λB)``: locate its maximum by ternary search, then bisect
the two zero crossings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import spectral
from .config import DEFAULT_TOL, ToleranceConfig, problem_scale
from .errors import (
    BNotIndefinite,
    DimensionMismatch,
    EmptyInterval,
    InconsistentChecks,
    IntervalNotOpen,
    NotPositiveDefiniteAtLambda,
    NotPositiveDefiniteAtRho,
    OutsideInterval,
    PencilError,
)
from .spectral import PSDStatus

_EPS = np.finfo(float).eps
_MAX_EXPANSIONS = 200
_MAX_TERNARY = 200
_MAX_BISECT = 200


@dataclass(frozen=True, eq=False)
class Pencil:
    """An ordered pair of symmetric matrices of equal size."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = spectral.sym(self.A)
        B = spectral.sym(self.B)
        if A.shape != B.shape:
            raise DimensionMismatch(f"A is {A.shape} but B is {B.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def scale(self) -> float:
        return problem_scale(self.A, self.B)

    def at(self, lam: float) -> np.ndarray:
        return self.A + lam * self.B


class IntervalKind(enum.Enum):
    EMPTY = "empty"
    SINGLETON = "singleton"
    INTERVAL = "interval"


@dataclass(frozen=True)
class PositivityInterval:
    """``I≥(A, B)`` together with whether ``I>(A, B)`` is non-empty.

    For ``EMPTY`` both endpoints are NaN. When ``strict_nonempty`` holds,
    ``I>(A, B)`` is exactly the open interval ``(lambda_minus, lambda_plus)``.
    """

    kind: IntervalKind
    lambda_minus: float = math.nan
    lambda_plus: float = math.nan
    strict_nonempty: bool = False

    @classmethod
    def empty(cls) -> PositivityInterval:
        return cls(IntervalKind.EMPTY)

    @property
    def is_empty(self) -> bool:
        return self.kind is IntervalKind.EMPTY

    @property
    def width(self) -> float:
        return self.lambda_plus - self.lambda_minus

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lambda_minus + self.lambda_plus)

    def contains(self, lam: float, tol: float = 0.0) -> bool:
        if self.is_empty:
            return False
        return self.lambda_minus - tol <= lam <= self.lambda_plus + tol

    def interior_points(self, k: int, margin: float = 0.0) -> np.ndarray:
        """``k`` equally spaced points strictly inside, kept ``margin`` (fraction of width) off the ends."""
        if self.kind is not IntervalKind.INTERVAL:
            raise IntervalNotOpen(f"interval kind is {self.kind.value}")
        lo = self.lambda_minus + margin * self.width
        hi = self.lambda_plus - margin * self.width
        return np.linspace(lo, hi, k + 2)[1:-1]

    def shifted(self, offset: float) -> PositivityInterval:
        return PositivityInterval(
            self.kind, self.lambda_minus + offset, self.lambda_plus + offset, self.strict_nonempty
        )

    def to_dict(self) -> dict:
        def num(v):
            return None if math.isnan(v) else float(v)

        return {
            "kind": self.kind.value,
            "lambda_minus": num(self.lambda_minus),
            "lambda_plus": num(self.lambda_plus),
            "strict_nonempty": bool(self.strict_nonempty),
        }


class Endpoint(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class Witness(NamedTuple):
    """A null vector at an endpoint lying outside ``N(A) ∩ N(B)``."""

    vector: np.ndarray
    b_value: float  # <Bv, v>
    ratio: float  # <Av, v> / <Bv, v>


@dataclass(frozen=True, eq=False)
class EndpointAnalysis:
    endpoint: Endpoint
    lam: float
    null_basis: np.ndarray
    joint_kernel_dim: int
    m_witnesses: list = field(default_factory=list)


def _require_indefinite(B, cfg, scale, exc=BNotIndefinite, name="B"):
    status, _ = spectral.psd_status(B, cfg, scale)
    if status is not PSDStatus.INDEFINITE:
        raise exc(f"{name} is {status.value}; the positivity interval needs an indefinite {name}")


def min_eig_at(p: Pencil, lam: float) -> float:
    """``λ_min(A + λB)``; concave in ``λ`` as a pointwise minimum of affine functions."""
    return float(spectral.eigvalsh(p.at(lam))[0])


def _deflate(p: Pencil, cfg: ToleranceConfig):
    """Restrict the pencil to the orthogonal complement of ``N(A) ∩ N(B)``.

    On the joint kernel every ``A + λB`` vanishes, which pins ``f`` at zero
    across the whole interval and hides the crossings. Removing it leaves a
    pencil whose ``f`` is strictly positive on the open interval.
    """
    K = spectral.joint_kernel(p.A, p.B, cfg.rank_tol * p.scale)
    Q = spectral.orth_complement(K, p.n)
    return Q.T @ p.A @ Q, Q.T @ p.B @ Q, K


def _bracket(f, step):
    """Expand geometrically from 0 until ``f`` is negative and decreasing outward on both sides.

    For concave ``f`` this brackets the maximizer. Terminates because an
    indefinite ``B`` drives ``f`` to ``-inf`` in both directions.
    """
    f0 = f(0.0)
    ends = []
    for sign in (-1.0, 1.0):
        fprev = f0
        t = step
        for _ in range(_MAX_EXPANSIONS):
            ft = f(sign * t)
            if ft < 0 and ft < fprev:
                break
            fprev = ft
            t *= 2.0
        else:
            raise PencilError("bracket expansion did not terminate; is B indefinite?")
        ends.append((sign * t, ft))
    return ends[0], ends[1]


def _ternary_max(f, lo, hi):
    best_x, best_f = lo, f(lo)
    for _ in range(_MAX_TERNARY):
        if hi - lo <= 4 * _EPS * max(1.0, abs(lo), abs(hi)):
            break
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        f1, f2 = f(m1), f(m2)
        for x, fx in ((m1, f1), (m2, f2)):
            if fx > best_f:
                best_x, best_f = x, fx
        if f1 < f2:
            lo = m1
        else:
            hi = m2
    mid = 0.5 * (lo + hi)
    fm = f(mid)
    if fm > best_f:
        best_x, best_f = mid, fm
    return best_x, best_f


def _bisect_crossing(f, outside, inside):
    """Zero crossing between ``outside`` (``f < 0``) and ``inside`` (``f >= 0``), to full precision."""
    for _ in range(_MAX_BISECT):
        if abs(inside - outside) <= 2 * _EPS * max(1.0, abs(inside), abs(outside)):
            break
        mid = 0.5 * (inside + outside)
        if f(mid) >= 0:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def positivity_interval(p: Pencil, cfg: ToleranceConfig = DEFAULT_TOL) -> PositivityInterval:
    """Compute ``I≥(A, B) = [λ₋, λ₊]`` and whether ``I>(A, B)`` is non-empty.

    Raises
    ------
    BNotIndefinite
        If ``B`` is semidefinite; then the set is a half-line or all of R and
        is not reported as an interval.
    """
    scale = p.scale
    _require_indefinite(p.B, cfg, scale)
    Ar, Br, _ = _deflate(p, cfg)

    def f(lam):
        return float(spectral.eigvalsh(Ar + lam * Br)[0])

    step = 1.0 + np.linalg.norm(p.A) / max(1.0, np.linalg.norm(p.B))
    (lo, _), (hi, _) = _bracket(f, step)
    lam_star, fmax = _ternary_max(f, lo, hi)
    thresh = cfg.psd_tol * scale
    if fmax < -thresh:
        return PositivityInterval.empty()
    if fmax <= 0:
        return PositivityInterval(IntervalKind.SINGLETON, float(lam_star), float(lam_star), False)

    lam_minus = _bisect_crossing(f, lo, lam_star)
    lam_plus = _bisect_crossing(f, hi, lam_star)
    if lam_plus - lam_minus <= cfg.width_tol * scale:
        mid = float(0.5 * (lam_minus + lam_plus))
        return PositivityInterval(IntervalKind.SINGLETON, mid, mid, False)
    strict = min_eig_at(p, 0.5 * (lam_minus + lam_plus)) > thresh
    return PositivityInterval(IntervalKind.INTERVAL, float(lam_minus), float(lam_plus), bool(strict))


@dataclass(frozen=True)
class Certified:
    interval: PositivityInterval


@dataclass(frozen=True, eq=False)
class Falsified:
    """A unit neutral vector on which ``A`` is negative."""

    witness: np.ndarray
    a_value: float
    b_value: float


def _falsifying_candidates(p: Pencil):
    # At the maximizer of f the lowest eigenspace of A + λ*B contains a
    # B-neutral vector, and on it <Ax, x> = f(λ*) < 0.
    def f(lam):
        return min_eig_at(p, lam)

    step = 1.0 + np.linalg.norm(p.A) / max(1.0, np.linalg.norm(p.B))
    (lo, _), (hi, _) = _bracket(f, step)
    lam_star, _ = _ternary_max(f, lo, hi)
    _, V = spectral.eig(p.at(lam_star))
    out = []
    E = V[:, : min(2, p.n)]
    b, U = spectral.eig(E.T @ p.B @ E)
    if b[0] < 0 < b[-1]:
        y = U[:, -1] / math.sqrt(b[-1]) + U[:, 0] / math.sqrt(-b[0])
        out.append(E @ y)
    out.append(V[:, 0])
    return out


def _neutral_descent(p: Pencil, x0: np.ndarray) -> np.ndarray:
    from scipy.optimize import minimize

    A, B = p.A, p.B
    res = minimize(
        lambda x: x @ A @ x,
        x0,
        jac=lambda x: 2 * A @ x,
        method="SLSQP",
        constraints=[
            {"type": "eq", "fun": lambda x: x @ B @ x, "jac": lambda x: 2 * B @ x},
            {"type": "eq", "fun": lambda x: x @ x - 1.0, "jac": lambda x: 2 * x},
        ],
        options={"maxiter": 200, "ftol": 1e-14},
    )
    return res.x


def neutral_positivity_certificate(
    p: Pencil, cfg: ToleranceConfig = DEFAULT_TOL, seed: int = 0, samples: int = 2000
):
    """Certify ``<Ax, x> >= 0`` on the neutral cone of ``B``, or produce a counterexample.

    ``I≥(A, B)`` is non-empty exactly when ``A`` is nonnegative on neutral
    vectors of ``B``, so a non-empty interval is the certificate. Otherwise the
    returned witness is a unit ``x`` with ``|<Bx, x>| <= root_tol`` and
    ``<Ax, x> < -psd_tol * scale``.
    """
    from .oracle import neutralize, sample_neutral

    interval = positivity_interval(p, cfg)
    if not interval.is_empty:
        return Certified(interval)

    scale = p.scale
    cands = _falsifying_candidates(p)
    cands.extend(sample_neutral(p.B, samples, seed, cfg))
    cands = [c / np.linalg.norm(c) for c in cands if np.linalg.norm(c) > 0]
    cands.sort(key=lambda x: x @ p.A @ x)

    best = None
    for x0 in cands[:5]:
        for x in (x0, _neutral_descent(p, x0)):
            x = neutralize(p.B, x, cfg, scale)
            if x is None:
                continue
            x = x / np.linalg.norm(x)
            a, b = float(x @ p.A @ x), float(x @ p.B @ x)
            if abs(b) <= cfg.root_tol and (best is None or a < best.a_value):
                best = Falsified(x, a, b)
    if best is None or best.a_value >= -cfg.psd_tol * scale:
        raise InconsistentChecks("interval is empty but no negative neutral vector was found")
    return best


def interior_nullspace(
    p: Pencil, interval: PositivityInterval, cfg: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Basis of ``N(A + λB)`` at the midpoint, checked against ``N(A) ∩ N(B)``.

    Inside the interval the null space does not move and equals the joint
    kernel; a mismatch raises :class:`InconsistentChecks`.
    """
    if interval.kind is not IntervalKind.INTERVAL:
        raise IntervalNotOpen(f"interval kind is {interval.kind.value}")
    thresh = cfg.rank_tol * p.scale
    w, V = spectral.eig(p.at(interval.midpoint))
    basis = V[:, np.abs(w) <= thresh]
    K = spectral.joint_kernel(p.A, p.B, thresh)
    if spectral.subspace_distance(basis, K) > math.sqrt(cfg.rank_tol):
        raise InconsistentChecks(
            f"interior kernel has dim {basis.shape[1]}, joint kernel has dim {K.shape[1]}"
        )
    return basis


def endpoint_analysis(
    p: Pencil, interval: PositivityInterval, which: Endpoint, cfg: ToleranceConfig = DEFAULT_TOL
) -> EndpointAnalysis:
    """Null space of ``A + λ±B`` split into the joint kernel and Rayleigh witnesses.

    Witnesses span the part of the endpoint kernel orthogonal to
    ``N(A) ∩ N(B)``; each has ``<Av,v>/<Bv,v> = -λ``. For a proper interval the
    sign of ``<Bv,v>`` is positive at the lower endpoint and negative at the
    upper one.
    """
    if interval.is_empty:
        raise EmptyInterval("no endpoints to analyse")
    which = Endpoint(which)
    lam = interval.lambda_minus if which is Endpoint.LOWER else interval.lambda_plus
    scale = p.scale
    w, V = spectral.eig(p.at(lam))
    null = V[:, np.abs(w) <= 10 * cfg.eig_tol * scale]
    K = spectral.joint_kernel(p.A, p.B, cfg.rank_tol * scale)

    P = null - K @ (K.T @ null) if K.size else null
    W = spectral.range_basis(P, 0.5) if P.size else P
    witnesses = []
    if W.shape[1]:
        b, U = spectral.eig(W.T @ p.B @ W)
        for bi, ui in zip(b, U.T):
            if abs(bi) <= cfg.rank_tol * scale:
                continue
            v = W @ ui
            witnesses.append(Witness(v, float(v @ p.B @ v), float((v @ p.A @ v) / (v @ p.B @ v))))

    proper = interval.kind is IntervalKind.INTERVAL
    for wt in witnesses:
        if abs(wt.ratio + lam) > cfg.root_tol * max(1.0, abs(lam)):
            raise InconsistentChecks(f"witness ratio {wt.ratio} does not match -λ = {-lam}")
        if proper and (wt.b_value > 0) != (which is Endpoint.LOWER):
            raise InconsistentChecks(f"witness <Bv,v> = {wt.b_value} has the wrong sign")
    if proper and W.shape[1] != len(witnesses):
        raise InconsistentChecks("endpoint kernel contains neutral vectors outside N(A) ∩ N(B)")
    return EndpointAnalysis(which, lam, null, K.shape[1], witnesses)


def seminorm(
    p: Pencil, lam: float, x, cfg: ToleranceConfig = DEFAULT_TOL
) -> float:
    """``<(A + λB)x, x>^{1/2}`` for ``λ`` in ``I≥(A, B)``."""
    M = p.at(lam)
    scale = p.scale
    if spectral.eigvalsh(M)[0] < -cfg.psd_tol * scale:
        raise OutsideInterval(f"A + {lam}B is not positive semidefinite")
    x = np.asarray(x, dtype=float)
    return math.sqrt(max(float(x @ M @ x), 0.0))


class CongruenceReduction(NamedTuple):
    G: np.ndarray
    interval: PositivityInterval  # I≥(I, G), in the shifted parameter η = λ - ρ
    rho: float

    @property
    def shifted(self) -> PositivityInterval:
        return self.interval.shifted(self.rho)


def congruence_reduction(
    p: Pencil, rho: float, cfg: ToleranceConfig = DEFAULT_TOL, verify: bool = True
) -> CongruenceReduction:
    """Reduce ``A + λB`` to ``I + (λ - ρ)G`` with ``G = S B S``, ``S = (A + ρB)^{-1/2}``.

    ``I≥(I, G) = [-1/||G₊||, 1/||G₋||]`` is read off the extreme eigenvalues of
    ``G``. With ``verify`` the shift identity ``I≥(A, B) = ρ + I≥(I, G)`` is
    checked against :func:`positivity_interval`.
    """
    scale = p.scale
    try:
        S = spectral.inv_sqrt_pd(p.at(rho), cfg, scale)
    except spectral.NotPSD as exc:
        raise NotPositiveDefiniteAtRho(str(exc)) from exc
    G = S @ p.B @ S
    G = (G + G.T) / 2
    g = spectral.eigvalsh(G)
    if not g[0] < 0 < g[-1]:
        raise BNotIndefinite("G is semidefinite, hence so is B")
    eta = PositivityInterval(IntervalKind.INTERVAL, float(-1.0 / g[-1]), float(-1.0 / g[0]), True)
    red = CongruenceReduction(G, eta, float(rho))
    if verify:
        ref = positivity_interval(p, cfg)
        got = red.shifted
        for a, b in ((got.lambda_minus, ref.lambda_minus), (got.lambda_plus, ref.lambda_plus)):
            if not abs(a - b) <= cfg.root_tol * max(1.0, abs(b)):
                raise InconsistentChecks(f"shift identity fails: {a} vs {b}")
    return red


class SimultaneousDiagonalization(NamedTuple):
    S: np.ndarray  # (A + λB)^{-1/2}
    U: np.ndarray  # orthonormal eigenvectors of S B S
    d: np.ndarray  # eigenvalues of S B S, ascending


def simultaneous_diagonalization(
    p: Pencil, lam: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> SimultaneousDiagonalization:
    """Congruence ``C = S U`` with ``Cᵀ B C = diag(d)`` and ``Cᵀ A C = diag(1 - λd)``."""
    scale = p.scale
    try:
        S = spectral.inv_sqrt_pd(p.at(lam), cfg, scale)
    except spectral.NotPSD as exc:
        raise NotPositiveDefiniteAtLambda(str(exc)) from exc
    d, U = spectral.eig(S @ p.B @ S)
    SAS = S @ p.A @ S
    err = np.linalg.norm(U.T @ SAS @ U - np.diag(1.0 - lam * d))
    if err > 10 * cfg.eig_tol * max(1.0, np.linalg.norm(SAS)):
        raise InconsistentChecks(f"UᵀSASU deviates from diag(1 - λd) by {err:.3e}")
    return SimultaneousDiagonalization(S, U, d)
