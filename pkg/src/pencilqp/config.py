from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

import numpy as np

ENV_TOL = "PENCILQP_TOL"


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds.

    Every tolerance is relative: callers multiply it by a problem scale,
    ``max(1, ||A||_F, ||B||_F)`` (see :func:`problem_scale`).
    """

    sym_tol: float = 1e-10
    eig_tol: float = 1e-9
    psd_tol: float = 1e-8
    rank_tol: float = 1e-9
    root_tol: float = 1e-8
    width_tol: float = 1e-7

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{f.name} must be a positive finite number, got {value!r}")

    def with_tol(self, tol: float) -> ToleranceConfig:
        """Override ``root_tol`` and ``psd_tol`` jointly (the CLI ``--tol`` flag)."""
        return replace(self, root_tol=tol, psd_tol=tol)

    @classmethod
    def from_env(cls) -> ToleranceConfig:
        cfg = cls()
        raw = os.environ.get(ENV_TOL)
        if raw:
            cfg = cfg.with_tol(float(raw))
        return cfg


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 4096
    refine_iters: int = 60
    samples: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.grid_points < 2 or self.refine_iters < 1 or self.samples < 1:
            raise ValueError("grid_points, refine_iters and samples must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


DEFAULT_TOL = ToleranceConfig()


def problem_scale(*mats) -> float:
    """``max(1, ||M||_F)`` over the given matrices."""
    return max([1.0] + [float(np.linalg.norm(m)) for m in mats])
