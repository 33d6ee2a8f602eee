"""JSON matrix and problem files.

A matrix payload is ``{"n": n, "data": [...]}`` with ``n²`` row-major reals.
Rectangular operators (``T``, ``V``) use ``{"rows": m, "cols": n, "data": [...]}``.
Python's float ``repr`` is the shortest string that parses back to the same
double, so write followed by read is value-identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import spectral
from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionMismatch
from .krein import KreinSpace, RegularizationProblem
from .qp1eqc import QP1EQCProblem

QP_KEYS = ("A", "B", "w0", "z0")
REG_KEYS = ("T", "V", "J_K", "J_E", "w0", "z0")


def _floats(seq, what):
    try:
        out = np.array([float(v) for v in seq], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what}: data must be a flat list of numbers") from exc
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{what}: non-finite entry")
    return out


def matrix_to_payload(M) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    m, n = M.shape
    data = [float(v) for v in M.ravel()]
    if m == n:
        return {"n": n, "data": data}
    return {"rows": m, "cols": n, "data": data}


def matrix_from_payload(obj, what="matrix", symmetric=True, cfg: ToleranceConfig = DEFAULT_TOL):
    """Parse a matrix payload; square symmetric payloads are checked within ``sym_tol``."""
    if not isinstance(obj, dict) or "data" not in obj:
        raise ValueError(f"{what}: expected an object with 'data'")
    if "n" in obj:
        m = n = int(obj["n"])
    elif "rows" in obj and "cols" in obj:
        m, n = int(obj["rows"]), int(obj["cols"])
    else:
        raise ValueError(f"{what}: needs 'n' or 'rows'/'cols'")
    data = _floats(obj["data"], what)
    if m < 0 or n < 0 or data.size != m * n:
        raise DimensionMismatch(f"{what}: expected {m * n} entries, got {data.size}")
    M = data.reshape(m, n)
    if symmetric:
        if m != n:
            raise DimensionMismatch(f"{what}: must be square")
        spectral.sym(M, cfg)
    return M


def vector_from_payload(obj, what="vector"):
    if not isinstance(obj, list):
        raise ValueError(f"{what}: expected a flat array")
    return _floats(obj, what)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_json(path, obj):
    Path(path).write_text(dumps(obj) + "\n")


def read_matrix(path, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return matrix_from_payload(read_json(path), str(path), True, cfg)


def write_matrix(path, M):
    write_json(path, matrix_to_payload(M))


def problem_to_payload(prob, rho: float | None = None) -> dict:
    if isinstance(prob, QP1EQCProblem):
        return {
            "A": matrix_to_payload(prob.A),
            "B": matrix_to_payload(prob.B),
            "w0": [float(v) for v in prob.w0],
            "z0": [float(v) for v in prob.z0],
        }
    out = {
        "T": matrix_to_payload(prob.T),
        "V": matrix_to_payload(prob.V),
        "J_K": matrix_to_payload(prob.K.J),
        "J_E": matrix_to_payload(prob.E.J),
        "w0": [float(v) for v in prob.w0],
        "z0": [float(v) for v in prob.z0],
    }
    if rho is not None:
        out["rho"] = float(rho)
    return out


def problem_from_payload(obj, cfg: ToleranceConfig = DEFAULT_TOL):
    """Return ``(problem, rho)``; ``rho`` is ``None`` unless a regularization file sets it."""
    if not isinstance(obj, dict):
        raise ValueError("problem file must hold a JSON object")
    if all(k in obj for k in QP_KEYS):
        prob = QP1EQCProblem(
            matrix_from_payload(obj["A"], "A", True, cfg),
            matrix_from_payload(obj["B"], "B", True, cfg),
            vector_from_payload(obj["w0"], "w0"),
            vector_from_payload(obj["z0"], "z0"),
        )
        return prob, None
    if all(k in obj for k in REG_KEYS):
        prob = RegularizationProblem(
            matrix_from_payload(obj["T"], "T", False, cfg),
            matrix_from_payload(obj["V"], "V", False, cfg),
            KreinSpace(matrix_from_payload(obj["J_K"], "J_K", True, cfg)),
            KreinSpace(matrix_from_payload(obj["J_E"], "J_E", True, cfg)),
            vector_from_payload(obj["w0"], "w0"),
            vector_from_payload(obj["z0"], "z0"),
        )
        rho = obj.get("rho")
        if rho is not None:
            rho = float(rho)
            if not math.isfinite(rho):
                raise ValueError("rho must be finite")
        return prob, rho
    raise ValueError(f"problem file needs keys {QP_KEYS} or {REG_KEYS}")


def read_problem(path, cfg: ToleranceConfig = DEFAULT_TOL):
    return problem_from_payload(read_json(path), cfg)


def write_problem(path, prob, rho: float | None = None):
    write_json(path, problem_to_payload(prob, rho))
