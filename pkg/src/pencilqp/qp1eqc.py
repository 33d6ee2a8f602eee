"""Quadratic programs with one equality quadratic constraint.

    minimize    <A(x - w0), x - w0>
    subject to  <B(x - z0), x - z0> = 0

A minimizer must satisfy ``(A + λB)x = Aw0 + λBz0`` for some ``λ`` with
``A + λB ⪰ 0``. Conversely, a feasible ``x`` solving that system with a PSD
multiplier is a global minimizer: for feasible ``y`` the objective equals the
convex Lagrangian ``q_λ(y) >= q_λ(x)``. The solver searches ``λ`` over the
positivity interval and treats the endpoints through their null spaces.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import spectral
from .config import DEFAULT_TOL, ToleranceConfig, problem_scale
from .errors import (
    DegenerateAtRhoWarning,
    DimensionMismatch,
    NoCandidatesWarning,
    RhoOutsideInterior,
)
from .krein import RegularizationProblem, admissible_interval, classify_range_of_L, normal_operator
from .pencil import (
    Endpoint,
    IntervalKind,
    Pencil,
    PositivityInterval,
    endpoint_analysis,
    positivity_interval,
)


class Certificate(enum.Enum):
    GLOBAL_MIN = "GlobalMin"
    STATIONARY_ONLY = "StationaryOnly"
    INFEASIBLE = "Infeasible"
    NO_PSD_MULTIPLIER = "NoPSDMultiplier"


@dataclass(frozen=True, eq=False)
class QP1EQCProblem:
    A: np.ndarray
    B: np.ndarray
    w0: np.ndarray
    z0: np.ndarray

    def __post_init__(self):
        A = spectral.sym(self.A)
        B = spectral.sym(self.B)
        w0 = np.asarray(self.w0, dtype=float).ravel()
        z0 = np.asarray(self.z0, dtype=float).ravel()
        n = A.shape[0]
        if B.shape != A.shape or w0.size != n or z0.size != n:
            raise DimensionMismatch("A, B, w0 and z0 must share one dimension")
        for name, val in (("A", A), ("B", B), ("w0", w0), ("z0", z0)):
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def pencil(self) -> Pencil:
        return Pencil(self.A, self.B)

    @property
    def scale(self) -> float:
        return problem_scale(self.A, self.B)

    def objective(self, x) -> float:
        d = np.asarray(x, dtype=float) - self.w0
        return float(d @ self.A @ d)

    def constraint(self, x) -> float:
        d = np.asarray(x, dtype=float) - self.z0
        return float(d @ self.B @ d)

    def rhs(self, lam: float) -> np.ndarray:
        return self.A @ self.w0 + lam * (self.B @ self.z0)

    @classmethod
    def from_regularization(cls, prob: RegularizationProblem, cfg: ToleranceConfig = DEFAULT_TOL):
        """Recast the constrained indefinite least-squares problem in QP1EQC form.

        Uses ``A = T#T``, ``B = V#V``, and centres solving ``A w = T#w0``,
        ``B z = V#z0``. The objectives then agree up to an additive constant.
        Raises ``ValueError`` when a centre does not exist.
        """
        A, B = prob.TT, prob.VV
        scale = prob.scale
        centres = []
        for M, r in ((A, prob.T.T @ prob.K.J @ prob.w0), (B, prob.V.T @ prob.E.J @ prob.z0)):
            c = spectral.pinv(M, cfg, scale) @ r
            if np.linalg.norm(M @ c - r) > cfg.root_tol * scale * max(1.0, np.linalg.norm(r)):
                raise ValueError("the linear term is not in the range of the quadratic form")
            centres.append(c)
        return cls(A, B, *centres)


@dataclass(frozen=True, eq=False)
class QPSolution:
    x: np.ndarray
    lam: float
    objective: float
    residual_stationarity: float
    residual_feasibility: float
    certificate: Certificate
    endpoint_case: bool = False

    def to_dict(self) -> dict:
        def num(v):
            return None if not math.isfinite(v) else float(v)

        return {
            "x": [num(v) for v in self.x],
            "lambda": num(self.lam),
            "objective": num(self.objective),
            "residual_stationarity": num(self.residual_stationarity),
            "residual_feasibility": num(self.residual_feasibility),
            "certificate": self.certificate.value,
            "endpoint_case": bool(self.endpoint_case),
        }


def _certify(prob, x, lam, interval, cfg, scale, endpoint_case):
    res_s = float(np.linalg.norm((prob.A + lam * prob.B) @ x - prob.rhs(lam)))
    res_f = abs(prob.constraint(x))
    tol = cfg.root_tol * scale
    ok_lam = interval.contains(lam, cfg.root_tol)
    if res_s <= tol and res_f <= tol and ok_lam:
        cert = Certificate.GLOBAL_MIN
    elif res_f > tol and res_s <= tol:
        cert = Certificate.INFEASIBLE
    else:
        cert = Certificate.STATIONARY_ONLY
    return QPSolution(x, float(lam), prob.objective(x), res_s, res_f, cert, endpoint_case)


def _interior_roots(h, lo, hi, grid, zero_tol):
    """Roots of ``h`` on ``[lo, hi]`` found by sampling and bracketing sign changes."""
    lams = np.linspace(lo, hi, grid)
    vals = np.array([h(t) for t in lams])
    roots = [t for t, v in zip(lams, vals) if abs(v) <= zero_tol]
    for i in range(grid - 1):
        a, b = vals[i], vals[i + 1]
        if abs(a) <= zero_tol or abs(b) <= zero_tol:
            continue
        if np.sign(a) != np.sign(b):
            roots.append(brentq(h, lams[i], lams[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots


def _endpoint_candidates(prob, interval, which, cfg, scale):
    ea = endpoint_analysis(prob.pencil, interval, which, cfg)
    lam = ea.lam
    M = prob.A + lam * prob.B
    r = prob.rhs(lam)
    x0 = spectral.pinv(M, cfg, scale) @ r
    if np.linalg.norm(M @ x0 - r) > cfg.root_tol * scale:
        return lam, []
    d = x0 - prob.z0
    out = []
    directions = [w.vector for w in ea.m_witnesses]
    c = float(d @ prob.B @ d)
    if abs(c) <= cfg.root_tol * scale:
        out.append(x0)
    for v in directions:
        a = float(v @ prob.B @ v)
        b = float(v @ prob.B @ d)
        disc = b * b - a * c
        if disc < 0:
            continue
        sq = math.sqrt(disc)
        # roots of a t^2 + 2 b t + c, in the cancellation-free form
        q = -(b + math.copysign(sq, b)) if b != 0 else sq
        ts = {q / a, c / q} if q != 0 else {0.0}
        out.extend(x0 + t * v for t in ts)
    return lam, out


def _dedupe(sols):
    # one record per point x; a flat h (e.g. w0 = z0) yields the same x at many λ
    kept = []
    for s in sols:
        same = [
            i for i, k in enumerate(kept)
            if np.linalg.norm(s.x - k.x) <= 1e-9 * max(1.0, np.linalg.norm(k.x))
        ]
        if not same:
            kept.append(s)
        elif s.certificate is Certificate.GLOBAL_MIN and kept[same[0]].certificate is not Certificate.GLOBAL_MIN:
            kept[same[0]] = s
    return kept


def solve(prob: QP1EQCProblem, cfg: ToleranceConfig = DEFAULT_TOL, grid: int = 256) -> list:
    """All candidate minimizers found via the Lagrange condition, sorted by objective.

    Returns a single ``NoPSDMultiplier`` record (with NaN ``x``) when the
    positivity interval is empty, and an empty list, with a
    :class:`NoCandidatesWarning`, when no candidate exists.

    Interior multipliers are roots of ``h(λ) = <B(x_λ - z0), x_λ - z0>`` with
    ``x_λ = (A + λB)⁺(Aw0 + λBz0)``, sampled on ``grid`` points inside
    ``[λ₋ + δ, λ₊ - δ]``, ``δ = 100 root_tol scale``. At each endpoint the
    stationary point is moved along endpoint null directions ``v`` by the real
    roots ``t`` of the scalar constraint quadratic.
    """
    scale = prob.scale
    interval = positivity_interval(prob.pencil, cfg)
    if interval.is_empty:
        nan = np.full(prob.n, np.nan)
        return [
            QPSolution(nan, math.nan, math.nan, math.nan, math.nan, Certificate.NO_PSD_MULTIPLIER)
        ]

    sols = []
    delta = 100 * cfg.root_tol * scale
    if interval.kind is IntervalKind.INTERVAL and interval.width > 2 * delta:

        def x_of(lam):
            return spectral.pinv(prob.A + lam * prob.B, cfg, scale) @ prob.rhs(lam)

        def h(lam):
            return prob.constraint(x_of(lam))

        lo, hi = interval.lambda_minus + delta, interval.lambda_plus - delta
        for lam in _interior_roots(h, lo, hi, grid, cfg.root_tol * scale):
            sols.append(_certify(prob, x_of(lam), lam, interval, cfg, scale, False))

    ends = [Endpoint.LOWER] if interval.kind is IntervalKind.SINGLETON else list(Endpoint)
    for which in ends:
        lam, cands = _endpoint_candidates(prob, interval, which, cfg, scale)
        sols.extend(_certify(prob, x, lam, interval, cfg, scale, True) for x in cands)

    sols = _dedupe(sols)
    if not sols:
        warnings.warn(
            "no sign change of h and no real endpoint roots; existence of a minimum is not decided",
            NoCandidatesWarning,
            stacklevel=2,
        )
    sols.sort(key=lambda s: s.objective)
    return sols


def solve_regularized(
    prob: RegularizationProblem, rho: float, cfg: ToleranceConfig = DEFAULT_TOL
) -> QPSolution:
    """Minimize ``[Tx - w0, Tx - w0]_K + ρ[Vx - z0, Vx - z0]_E`` for admissible interior ``ρ``.

    Solves the normal equation ``(T#T + ρV#V)x = T#w0 + ρV#z0`` by
    pseudo-inverse. The functional is convex for such ``ρ``, so a consistent
    solve is a global minimizer (``GlobalMin``). If ``R(L)`` is degenerate at
    ``ρ`` a :class:`DegenerateAtRhoWarning` is issued and an inconsistent
    system yields a least-squares ``StationaryOnly`` answer. The reported
    ``objective`` is the regularized functional; ``residual_feasibility`` is
    the violation of the original constraint.
    """
    interval = admissible_interval(prob, cfg)
    scale = prob.scale
    lo, hi = interval.lambda_minus, interval.lambda_plus
    if interval.kind is not IntervalKind.INTERVAL or not (
        lo + cfg.root_tol * max(1.0, abs(lo)) < rho < hi - cfg.root_tol * max(1.0, abs(hi))
    ):
        raise RhoOutsideInterior(f"rho={rho} is not inside the admissible interval {interval}")
    cls = classify_range_of_L(prob, rho, cfg)
    if not cls.nondegenerate:
        warnings.warn(
            f"R(L) is degenerate at rho={rho} (isotropic dim {cls.isotropic_dim})",
            DegenerateAtRhoWarning,
            stacklevel=2,
        )
    M = normal_operator(prob, rho)
    r = prob.rhs(rho)
    x = spectral.pinv(M, cfg, scale) @ r
    res_s = float(np.linalg.norm(M @ x - r))
    Tx, Vx = prob.T @ x - prob.w0, prob.V @ x - prob.z0
    res_f = abs(float(Vx @ prob.E.J @ Vx))
    obj = float(Tx @ prob.K.J @ Tx) + rho * float(Vx @ prob.E.J @ Vx)
    ok = res_s <= cfg.root_tol * scale * max(1.0, float(np.linalg.norm(r)))
    cert = Certificate.GLOBAL_MIN if ok else Certificate.STATIONARY_ONLY
    return QPSolution(x, float(rho), obj, res_s, res_f, cert, False)


__all__ = [
    "Certificate",
    "PositivityInterval",
    "QP1EQCProblem",
    "QPSolution",
    "solve",
    "solve_regularized",
]
