"""Command-line front end.

Exit codes: 0 success, 1 error (bad input, precondition), 2 empty positivity
interval, 3 ``solve`` found no certified minimizer, 4 ``classify`` interior
samples disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import io
from .config import OracleConfig, ToleranceConfig
from .errors import PencilError
from .krein import RegularizationProblem, admissible_interval, classify_range_of_L
from .oracle import grid_interval, rayleigh_estimates
from .pencil import (
    IntervalKind,
    Pencil,
    congruence_reduction,
    positivity_interval,
    simultaneous_diagonalization,
)
from .qp1eqc import Certificate, QP1EQCProblem, solve

EXIT_OK, EXIT_ERROR, EXIT_EMPTY, EXIT_NO_CANDIDATES, EXIT_DISAGREE = 0, 1, 2, 3, 4
ORACLE_AGREE_TOL = 1e-5


def _tol(args) -> ToleranceConfig:
    cfg = ToleranceConfig.from_env()
    return cfg.with_tol(args.tol) if args.tol is not None else cfg


def _emit(args, obj, text=None):
    if args.json or text is None:
        print(io.dumps(obj))
    else:
        print(text)


def _fmt_interval(iv) -> str:
    if iv.kind is IntervalKind.EMPTY:
        return "empty"
    if iv.kind is IntervalKind.SINGLETON:
        return f"singleton {{{iv.lambda_minus!r}}}"
    strict = "strictly positive inside" if iv.strict_nonempty else "no strict interior"
    return f"[{iv.lambda_minus!r}, {iv.lambda_plus!r}] ({strict})"


def _matrix(M):
    return [[float(v) for v in row] for row in np.atleast_2d(M)]


def _pencil(args, cfg) -> Pencil:
    return Pencil(io.read_matrix(args.A, cfg), io.read_matrix(args.B, cfg))


def _qp_problem(path, cfg) -> QP1EQCProblem:
    prob, _ = io.read_problem(path, cfg)
    if not isinstance(prob, QP1EQCProblem):
        raise ValueError("expected a QP1EQC-form problem file (keys A, B, w0, z0)")
    return prob


def _reg_problem(path, cfg) -> RegularizationProblem:
    prob, _ = io.read_problem(path, cfg)
    if not isinstance(prob, RegularizationProblem):
        raise ValueError("expected a regularization-form problem file (keys T, V, J_K, J_E, w0, z0)")
    return prob


def cmd_interval(args) -> int:
    cfg = _tol(args)
    iv = positivity_interval(_pencil(args, cfg), cfg)
    _emit(args, iv.to_dict(), _fmt_interval(iv))
    return EXIT_EMPTY if iv.is_empty else EXIT_OK


def cmd_solve(args) -> int:
    cfg = _tol(args)
    prob = _qp_problem(args.problem, cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sols = solve(prob, cfg, grid=args.grid)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    records = [s.to_dict() for s in sols]
    lines = [
        f"{r['certificate']:<15} objective={r['objective']!r} lambda={r['lambda']!r} x={r['x']}"
        + (" (endpoint)" if r["endpoint_case"] else "")
        for r in records
    ]
    _emit(args, records, "\n".join(lines) if lines else "no candidates")
    if sols and sols[0].certificate is Certificate.NO_PSD_MULTIPLIER:
        return EXIT_EMPTY
    if any(s.certificate is Certificate.GLOBAL_MIN for s in sols):
        return EXIT_OK
    return EXIT_NO_CANDIDATES


def classify_report(prob: RegularizationProblem, k: int, cfg: ToleranceConfig) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        iv = admissible_interval(prob, cfg)
    report = {"interval": iv.to_dict(), "interior": [], "endpoints": {}, "consistent": True}
    if iv.kind is not IntervalKind.INTERVAL:
        report["consistent"] = None
        return report
    flags = set()
    for rho in iv.interior_points(k):
        c = classify_range_of_L(prob, float(rho), cfg)
        report["interior"].append({"rho": float(rho), **c.to_dict()})
        flags.add((c.nondegenerate, c.regular))
    for name, rho in (("lower", iv.lambda_minus), ("upper", iv.lambda_plus)):
        if rho == 0:
            continue
        c = classify_range_of_L(prob, rho, cfg)
        report["endpoints"][name] = {"rho": rho, **c.to_dict()}
        if c.regular:
            report["consistent"] = False
    if len(flags) > 1:
        report["consistent"] = False
    return report


def cmd_classify(args) -> int:
    cfg = _tol(args)
    report = classify_report(_reg_problem(args.problem, cfg), args.rho_samples, cfg)
    lines = [f"admissible interval: {report['interval']}"]
    lines += [f"  rho={r['rho']!r}: {r['label']}" for r in report["interior"]]
    lines += [f"  {k} rho={r['rho']!r}: {r['label']}" for k, r in report["endpoints"].items()]
    _emit(args, report, "\n".join(lines))
    return EXIT_DISAGREE if report["consistent"] is False else EXIT_OK


def cmd_reduce(args) -> int:
    cfg = _tol(args)
    red = congruence_reduction(_pencil(args, cfg), args.rho, cfg)
    out = {
        "rho": red.rho,
        "G": _matrix(red.G),
        "eta_minus": red.interval.lambda_minus,
        "eta_plus": red.interval.lambda_plus,
        "shifted": red.shifted.to_dict(),
        "shift_identity_verified": True,
    }
    _emit(args, out, f"I(I,G) = [{out['eta_minus']!r}, {out['eta_plus']!r}], shifted {_fmt_interval(red.shifted)}")
    return EXIT_OK


def cmd_diag(args) -> int:
    cfg = _tol(args)
    sd = simultaneous_diagonalization(_pencil(args, cfg), args.lam, cfg)
    out = {
        "lambda": float(args.lam),
        "S": _matrix(sd.S),
        "U": _matrix(sd.U),
        "d": [float(v) for v in sd.d],
        "identity_verified": True,
    }
    _emit(args, out, f"d = {out['d']}, diagonal identity verified")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _tol(args)
    p = _pencil(args, cfg)
    ocfg = OracleConfig(grid_points=args.grid, samples=args.samples, seed=args.seed)
    grid = grid_interval(p, ocfg)
    ref = positivity_interval(p, cfg)
    if grid.is_empty or ref.is_empty:
        agree = grid.is_empty and ref.is_empty
    else:
        agree = bool(
            abs(grid.lambda_minus - ref.lambda_minus) <= ORACLE_AGREE_TOL
            and abs(grid.lambda_plus - ref.lambda_plus) <= ORACLE_AGREE_TOL
        )
    ray = rayleigh_estimates(p, ocfg)
    out = {
        "oracle": grid.to_dict(),
        "analytic": ref.to_dict(),
        "agree": agree,
        "mu_plus_est": ray.mu_plus_est,
        "mu_minus_est": ray.mu_minus_est,
        "seed": args.seed,
    }
    _emit(args, out, f"oracle {_fmt_interval(grid)}, analytic {_fmt_interval(ref)}, agree={agree}")
    return EXIT_OK if agree else EXIT_DISAGREE


def _u64(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with every other input error
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override root_tol and psd_tol")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    ap = _Parser(prog="pencilqp", description="Positivity intervals of A + λB and QP1EQC.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("interval", parents=[common], help="positivity interval of A + λB")
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(func=cmd_interval)

    s = sub.add_parser("solve", parents=[common], help="solve a QP1EQC problem file")
    s.add_argument("problem")
    s.add_argument("--grid", type=int, default=256, help="sample count for the multiplier search")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("classify", parents=[common], help="classify R(L) across the admissible interval")
    s.add_argument("problem")
    s.add_argument("--rho-samples", type=int, default=5)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reduce", parents=[common], help="congruence reduction at a PD point rho")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--rho", type=float, required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("diag", parents=[common], help="simultaneous diagonalization at lambda")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--lam", type=float, required=True)
    s.set_defaults(func=cmd_diag)

    s = sub.add_parser("oracle", parents=[common], help="grid oracle versus the analytic interval")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--grid", type=int, default=OracleConfig.grid_points)
    s.add_argument("--samples", type=int, default=OracleConfig.samples)
    s.add_argument("--seed", type=_u64, default=0)
    s.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except (PencilError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
