"""Brute-force cross-checks and seeded random instances.

Nothing here reuses the interval search in :mod:`pencilqp.pencil`; only the
eigensolver is shared.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import spectral
from .config import DEFAULT_TOL, OracleConfig, ToleranceConfig, problem_scale
from .errors import BNotIndefinite, NoSamplesOnSide
from .pencil import IntervalKind, Pencil, PositivityInterval

# Absolute PSD slack (times scale) used by the grid oracle. Much tighter than
# psd_tol so endpoints are not pushed outward by more than ~1e-12/slope.
GRID_PSD_SLACK = 1e-12
GRID_STRICT = 1e-8
GRID_WIDTH = 1e-7


def _indefinite_or_raise(B, scale, cfg=DEFAULT_TOL):
    w = spectral.eigvalsh(B)
    t = cfg.psd_tol * scale
    if not (w[0] < -t and w[-1] > t):
        raise BNotIndefinite("B must be indefinite")
    return w


def grid_interval(p: Pencil, ocfg: OracleConfig = OracleConfig()) -> PositivityInterval:
    """Bracket ``I≥(A, B)`` by PSD-testing ``A + λB`` on a grid, then bisect.

    The grid covers ``[-R, R]`` where, by Weyl's inequality,
    ``I≥ ⊆ [-λmax(A)/λmax(B), λmax(A)/|λmin(B)|]``. It is the union of a
    uniform grid and a geometric one accumulating at 0. When no grid point is
    PSD, the concave ``λ_min`` is maximized near the best grid point before
    the interval is declared empty.
    """
    A, B = p.A, p.B
    scale = p.scale
    wB = _indefinite_or_raise(B, scale)
    amax = spectral.eigvalsh(A)[-1]
    R = 1.01 * abs(amax) / min(wB[-1], -wB[0]) + 1e-3
    geo = R * 2.0 ** -np.arange(1, 61)
    grid = np.unique(np.concatenate([np.linspace(-R, R, ocfg.grid_points), geo, -geo, [0.0]]))
    fmin = spectral.eigvalsh(A[None] + grid[:, None, None] * B[None])[:, 0]
    tau = GRID_PSD_SLACK * scale

    def f(lam):
        return spectral.eigvalsh(A + lam * B)[0]

    def psd(lam):
        return f(lam) >= -tau

    def refine(bad, good):
        for _ in range(ocfg.refine_iters):
            mid = 0.5 * (bad + good)
            if psd(mid):
                good = mid
            else:
                bad = mid
        return 0.5 * (bad + good)

    ok = np.flatnonzero(fmin >= -tau)
    if ok.size:
        i0, i1 = ok[0], ok[-1]
        lo = refine(grid[i0 - 1], grid[i0]) if i0 > 0 else grid[0]
        hi = refine(grid[i1 + 1], grid[i1]) if i1 < grid.size - 1 else grid[-1]
    else:
        j = int(np.argmax(fmin))
        a, b = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
        invphi = (math.sqrt(5) - 1) / 2
        c, d = b - invphi * (b - a), a + invphi * (b - a)
        fc, fd = f(c), f(d)
        for _ in range(4 * ocfg.refine_iters):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f(d)
        top = 0.5 * (a + b)
        if not psd(top):
            return PositivityInterval.empty()
        lo = refine(grid[max(j - 1, 0)], top)
        hi = refine(grid[min(j + 1, grid.size - 1)], top)

    if hi - lo <= GRID_WIDTH * scale:
        mid = 0.5 * (lo + hi)
        return PositivityInterval(IntervalKind.SINGLETON, mid, mid, False)
    strict = f(0.5 * (lo + hi)) > GRID_STRICT * scale
    return PositivityInterval(IntervalKind.INTERVAL, float(lo), float(hi), bool(strict))


class RayleighEstimates(NamedTuple):
    mu_plus_est: float  # >= inf{<Az,z> : <Bz,z> = 1}
    mu_minus_est: float  # <= sup{<Ay,y>/<By,y> : <By,y> < 0}


def rayleigh_estimates(p: Pencil, ocfg: OracleConfig = OracleConfig()) -> RayleighEstimates:
    """Monte-Carlo estimates of the Rayleigh constants bounding the interval.

    ``λ₋ = -inf{<Az,z>/<Bz,z> : <Bz,z> > 0}`` and
    ``λ₊ = -sup{<Ay,y>/<By,y> : <By,y> < 0}``. Taking the inf/sup over a
    finite sample gives one-sided bounds, so
    ``-mu_plus_est <= λ₋ <= λ₊ <= -mu_minus_est`` always.
    """
    _indefinite_or_raise(p.B, p.scale)
    rng = np.random.default_rng(ocfg.seed)
    Z = rng.standard_normal((ocfg.samples, p.n))
    a = np.einsum("ij,jk,ik->i", Z, p.A, Z)
    b = np.einsum("ij,jk,ik->i", Z, p.B, Z)
    pos, neg = b > 0, b < 0
    if not pos.any() or not neg.any():
        raise NoSamplesOnSide("sampling never reached one sign of <Bz,z>")
    return RayleighEstimates(float(np.min(a[pos] / b[pos])), float(np.max(a[neg] / b[neg])))


def neutralize(B, x, cfg: ToleranceConfig = DEFAULT_TOL, scale: float | None = None):
    """Rescale the positive (or negative) spectral part of ``x`` so ``<Bx, x> = 0`` exactly.

    Returns ``None`` when ``x`` has no component on one of the two sides.
    """
    B = np.asarray(B, dtype=float)
    if scale is None:
        scale = problem_scale(B)
    w, V = spectral.eig(B)
    c = V.T @ np.asarray(x, dtype=float)
    thr = cfg.rank_tol * scale
    pos, neg = w > thr, w < -thr
    P = float(np.sum(w[pos] * c[pos] ** 2))
    N = float(-np.sum(w[neg] * c[neg] ** 2))
    z = float(np.sum(w[~(pos | neg)] * c[~(pos | neg)] ** 2))
    if P <= 0 or N <= 0:
        return None
    c = c.copy()
    if N - z > 0 and P >= N:
        c[pos] *= math.sqrt((N - z) / P)
    else:
        c[neg] *= math.sqrt((P + z) / N)
    return V @ c


def sample_neutral(B, count: int, seed: int = 0, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``count`` unit vectors ``x`` with ``<Bx, x> = 0`` up to rounding, one per row.

    Each sample is ``u/√<Bu,u> + v/√(-<Bv,v>) + z`` with ``u`` a random
    combination of positive eigenvectors, ``v`` of negative ones and ``z`` a
    random null-space component; the result is re-balanced and normalized.
    """
    B = spectral.sym(B, cfg)
    scale = problem_scale(B)
    w, V = spectral.eig(B)
    t = cfg.psd_tol * scale
    pos, neg = w > t, w < -t
    if not (pos.any() and neg.any()):
        raise BNotIndefinite("B must be indefinite to have nontrivial neutral vectors")
    zero = ~(pos | neg)
    rng = np.random.default_rng(seed)
    n = B.shape[0]
    G = rng.standard_normal((count, n))
    Cp = np.where(pos, G, 0.0)
    Cn = np.where(neg, G, 0.0)
    p = Cp**2 @ np.where(pos, w, 0.0)
    q = -(Cn**2 @ np.where(neg, w, 0.0))
    C = Cp / np.sqrt(p)[:, None] + Cn / np.sqrt(q)[:, None]
    if zero.any():
        C += np.where(zero, G, 0.0) * rng.standard_normal(count)[:, None]
    out = np.empty((count, n))
    for i in range(count):
        x = neutralize(B, V @ C[i], cfg, scale)
        out[i] = x / np.linalg.norm(x)
    return out


def sample_feasible(prob, count: int, seed: int = 0, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Points ``y = z₀ + r q`` on the constraint set ``<B(y - z₀), y - z₀> = 0``.

    ``q`` are neutral unit vectors of ``B`` and the radii ``r`` are Gaussian
    with spread ``2 max(1, ||w₀ - z₀||)``.
    """
    Q = sample_neutral(prob.B, count, seed, cfg)
    rng = np.random.default_rng([seed, 1])
    spread = 2.0 * max(1.0, float(np.linalg.norm(prob.w0 - prob.z0)))
    r = spread * rng.standard_normal(count)
    return prob.z0[None, :] + r[:, None] * Q


# --- seeded random instances -------------------------------------------------

PENCIL_VARIANTS = ("open", "joint_kernel", "endpoint", "singleton")


def _orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _indefinite_spectrum(rng, n):
    k = int(rng.integers(1, n))  # number of positive eigenvalues, 1..n-1
    mags = rng.uniform(0.3, 2.0, n)
    return np.concatenate([mags[:k], -mags[k:]])


def random_pencil(rng, n: int, variant: str | None = None):
    """A pencil ``(A, B)`` with ``A = M - λ₀B``, ``M ⪰ 0`` and ``B`` indefinite.

    Returns ``(pencil, variant, lam0)``. ``λ₀`` always lies in ``I≥(A, B)``:
    for ``"open"`` in its interior, for ``"endpoint"`` at one end, and for
    ``"singleton"`` it is the whole set. ``"joint_kernel"`` gives ``A`` and
    ``B`` a common null space.
    """
    if variant is None:
        choices = [v for v in PENCIL_VARIANTS if not (v == "joint_kernel" and n < 3)]
        weights = np.array([0.55 if v == "open" else 0.15 for v in choices])
        variant = str(rng.choice(choices, p=weights / weights.sum()))
    lam0 = float(rng.uniform(-3, 3))
    Q = _orthogonal(rng, n)
    if variant == "joint_kernel":
        k = int(rng.integers(1, n - 1))
        W = Q[:, k:]
        m = n - k
        U = _orthogonal(rng, m)
        Bw = U @ np.diag(_indefinite_spectrum(rng, m)) @ U.T
        X = rng.standard_normal((m, m))
        Mw = X @ X.T + 0.1 * np.eye(m)
        B = W @ Bw @ W.T
        M = W @ Mw @ W.T
    else:
        B = Q @ np.diag(_indefinite_spectrum(rng, n)) @ Q.T
        if variant == "open":
            X = rng.standard_normal((n, n))
            M = X @ X.T + 0.1 * np.eye(n)
        elif variant == "endpoint":
            X = rng.standard_normal((n, n - 1))
            M = X @ X.T
        elif variant == "singleton":
            w, V = np.linalg.eigh(B)
            kern = np.column_stack([V[:, 0], V[:, -1]])
            P = np.eye(n) - kern @ kern.T
            X = rng.standard_normal((n, n))
            M = P @ X @ X.T @ P
        else:
            raise ValueError(f"unknown variant {variant!r}")
    A = M - lam0 * B
    return Pencil((A + A.T) / 2, (B + B.T) / 2), variant, lam0


REGULARIZATION_VARIANTS = ("square", "wide")


def _realize(rng, H):
    """Factor a symmetric ``H`` as ``Tᵀ J T`` with a random diagonal Gram ``J``."""
    w, Q = np.linalg.eigh(H)
    keep = np.abs(w) > 1e-12 * max(1.0, np.abs(w).max())
    s = rng.uniform(0.5, 2.0, int(keep.sum()))
    T = (np.sqrt(np.abs(w[keep]) / s))[:, None] * Q[:, keep].T
    return T, np.diag(np.sign(w[keep]) * s)


def random_regularization_problem(rng, n: int, variant: str | None = None):
    """A problem whose admissible interval is open and contains ``λ₀`` in its interior.

    ``T#T = M - λ₀ V#V`` with ``M`` positive definite, resampled until
    ``T#T`` is indefinite. ``"square"`` uses an invertible ``V``; ``"wide"``
    gives ``V`` one fewer row than columns, so ``V#V`` is singular.
    Returns ``(problem, variant, lam0)``.
    """
    from .krein import KreinSpace, RegularizationProblem

    if variant is None:
        variant = str(rng.choice(REGULARIZATION_VARIANTS))
    if variant not in REGULARIZATION_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if n < 2:
        raise ValueError("need n >= 2")
    m = n if variant == "square" else n - 1
    if m < 2:
        raise ValueError("the wide variant needs n >= 3")
    while True:
        V = rng.standard_normal((m, n))
        k = int(rng.integers(1, m))
        JE = np.diag(np.concatenate([rng.uniform(0.5, 2.0, k), -rng.uniform(0.5, 2.0, m - k)]))
        VV = V.T @ JE @ V
        X = rng.standard_normal((n, n))
        M = X @ X.T + 0.2 * np.eye(n)
        lam0 = float(rng.uniform(-3, 3))
        if abs(lam0) < 0.2:
            continue
        TT = M - lam0 * VV
        w = np.linalg.eigvalsh(TT)
        if w[0] < -1e-3 and w[-1] > 1e-3:
            break
    T, JK = _realize(rng, (TT + TT.T) / 2)
    w0 = rng.standard_normal(T.shape[0])
    z0 = rng.standard_normal(m)
    prob = RegularizationProblem(T, V, KreinSpace(JK), KreinSpace(JE), w0, z0)
    return prob, variant, lam0
