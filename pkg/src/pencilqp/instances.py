"""Small closed-form instances with known answers."""

from __future__ import annotations

import numpy as np

from .krein import KreinSpace, RegularizationProblem
from .pencil import Pencil
from .qp1eqc import QP1EQCProblem


def block_signature_pencil(alpha: float = -1.0, beta: float = 2.0, p: int = 2, q: int = 2) -> Pencil:
    """``A = diag(α I_p, β I_q)``, ``B = diag(I_p, -I_q)``; interval ``[-α, β]`` when ``-α <= β``."""
    A = np.diag(np.r_[np.full(p, alpha), np.full(q, beta)])
    B = np.diag(np.r_[np.ones(p), -np.ones(q)])
    return Pencil(A, B)


def block_signature_regularization(
    alpha: float = -1.0, beta: float = 2.0, p: int = 2, q: int = 2, w0=None, z0=None
) -> RegularizationProblem:
    """``T = V = I`` with ``J_K = diag(α I_p, β I_q)`` and ``J_E = diag(I_p, -I_q)``."""
    n = p + q
    K = KreinSpace.from_signature(np.r_[np.full(p, alpha), np.full(q, beta)])
    E = KreinSpace.from_signature(np.r_[np.ones(p), -np.ones(q)])
    w0 = np.zeros(n) if w0 is None else w0
    z0 = np.zeros(n) if z0 is None else z0
    return RegularizationProblem(np.eye(n), np.eye(n), K, E, w0, z0)


def truncated_l2_pencil(N: int) -> Pencil:
    """``A = diag(1, -(1 - 1/k))_{k=2..N}``, ``B = diag(-1/2, 1, ..., 1)``.

    The interval is ``[1 - 1/N, 2]``; as ``N`` grows it tends to ``[1, 2]``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    k = np.arange(2, N + 1)
    A = np.diag(np.r_[1.0, -(1.0 - 1.0 / k)])
    B = np.diag(np.r_[-0.5, np.ones(N - 1)])
    return Pencil(A, B)


def endpoint_qp() -> QP1EQCProblem:
    """Optimum ``2/3`` at ``x = (1/3, ±2/3)`` with multiplier ``λ = 1``, the upper endpoint."""
    return QP1EQCProblem(np.diag([2.0, 1.0]), np.diag([1.0, -1.0]), [0.0, 0.0], [1.0, 0.0])


def cone_qp(w0=(1.0, 0.0)) -> QP1EQCProblem:
    """Distance from ``w0`` to the cone ``x₁ = ±x₂``."""
    return QP1EQCProblem(np.eye(2), np.diag([1.0, -1.0]), list(w0), [0.0, 0.0])
