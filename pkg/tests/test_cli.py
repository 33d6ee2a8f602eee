import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pencilqp import io
from pencilqp.cli import main
from pencilqp.errors import NotSymmetric
from pencilqp.instances import block_signature_regularization, endpoint_qp
from pencilqp.krein import KreinSpace, RegularizationProblem
from pencilqp.oracle import random_regularization_problem
from pencilqp.qp1eqc import QP1EQCProblem

DATA = Path(__file__).resolve().parents[1] / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def canon(obj):
    """Round floats to 6 decimals so goldens compare at 1e-6."""
    if isinstance(obj, float):
        return round(obj, 6) + 0.0
    if isinstance(obj, list):
        return [canon(v) for v in obj]
    if isinstance(obj, dict):
        return {k: canon(v) for k, v in obj.items()}
    return obj


def assert_matches_golden(got, name):
    want = json.loads((GOLDEN / name).read_text())

    def walk(a, b, path):
        if isinstance(b, float) or isinstance(a, float):
            assert abs(a - b) <= 1e-6, path
        elif isinstance(b, dict):
            assert a.keys() == b.keys(), path
            for k in b:
                walk(a[k], b[k], f"{path}.{k}")
        elif isinstance(b, list):
            assert len(a) == len(b), path
            for i, (x, y) in enumerate(zip(a, b)):
                walk(x, y, f"{path}[{i}]")
        else:
            assert a == b, path

    walk(canon(got), canon(want), name)


@pytest.mark.parametrize(
    "a, b, golden",
    [
        ("blocksig_A.json", "blocksig_B.json", "blocksig_interval.json"),
        ("blocksig_swapped_A.json", "blocksig_B.json", "blocksig_swapped_interval.json"),
        ("l2_50_A.json", "l2_50_B.json", "l2_50_interval.json"),
    ],
)
def test_interval_goldens(capsys, a, b, golden):
    code, out, _ = run(capsys, "interval", DATA / a, DATA / b, "--json")
    assert code == 0
    assert_matches_golden(json.loads(out), golden)


def test_interval_blocksig_exact_schema(capsys):
    _, out, _ = run(capsys, "interval", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--json")
    got = json.loads(out)
    assert list(got) == ["kind", "lambda_minus", "lambda_plus", "strict_nonempty"]
    assert got["kind"] == "interval" and got["strict_nonempty"] is True
    assert abs(got["lambda_minus"] - 1) <= 1e-8 and abs(got["lambda_plus"] - 2) <= 1e-8


def test_interval_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "interval", DATA / "identity2.json", DATA / "signature2.json")
    assert code == 0 and "-1.0" in out
    assert run(capsys, "interval", DATA / "neg_identity2.json", DATA / "signature2.json")[0] == 2
    code, _, err = run(capsys, "interval", DATA / "identity2.json", DATA / "identity2.json")
    assert code == 1 and "BNotIndefinite" in err
    assert run(capsys, "interval", tmp_path / "missing.json", DATA / "identity2.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "data": [1, 2, 3]}')
    assert run(capsys, "interval", bad, DATA / "signature2.json")[0] == 1
    bad.write_text('{"n": 2, "data": [1, 2, 0, 1]}')
    code, _, err = run(capsys, "interval", bad, DATA / "signature2.json")
    assert code == 1 and "NotSymmetric" in err
    bad.write_text("not json")
    assert run(capsys, "interval", bad, DATA / "signature2.json")[0] == 1
    assert run(capsys, "interval", DATA / "blocksig_A.json", DATA / "signature2.json")[0] == 1
    assert run(capsys, "interval", DATA / "blocksig_A.json")[0] == 1


def test_tol_flag_and_env(capsys, monkeypatch):
    code, out, _ = run(capsys, "interval", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--json", "--tol", "1e-6")
    assert code == 0 and abs(json.loads(out)["lambda_minus"] - 1) < 1e-5
    monkeypatch.setenv("PENCILQP_TOL", "1e-6")
    assert run(capsys, "interval", DATA / "blocksig_A.json", DATA / "blocksig_B.json")[0] == 0
    monkeypatch.setenv("PENCILQP_TOL", "-1")
    assert run(capsys, "interval", DATA / "blocksig_A.json", DATA / "blocksig_B.json")[0] == 1


def test_solve(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", DATA / "endpoint_qp.json", "--json")
    assert code == 0
    recs = json.loads(out)
    assert_matches_golden(recs, "endpoint_qp_solve.json")
    assert [r["certificate"] for r in recs] == ["GlobalMin", "GlobalMin"]
    assert all(abs(r["objective"] - 2 / 3) <= 1e-8 for r in recs)

    w = [0.5, -0.25]
    path = tmp_path / "trivial.json"
    io.write_problem(path, QP1EQCProblem(np.eye(2), np.diag([1.0, -1.0]), w, w))
    code, out, _ = run(capsys, "solve", path, "--json", "--grid", "64")
    assert code == 0 and json.loads(out)[0]["objective"] == pytest.approx(0.0)

    assert run(capsys, "solve", DATA / "empty_qp.json")[0] == 2
    B = np.diag([1.0, -1.0])
    io.write_problem(path, QP1EQCProblem(-B, B, [1.0, 0.0], [0.0, 0.0]))
    code, out, err = run(capsys, "solve", path)
    assert code == 3 and "no candidates" in out and "warning" in err
    assert run(capsys, "solve", DATA / "blocksig_regularization.json")[0] == 1
    path.write_text('{"A": {"n": 1, "data": [1]}}')
    assert run(capsys, "solve", path)[0] == 1


def test_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", DATA / "blocksig_regularization.json", "--json")
    assert code == 0
    rep = json.loads(out)
    assert_matches_golden(rep, "blocksig_classify.json")
    assert {r["label"] for r in rep["interior"]} == {"regular"}
    assert rep["endpoints"]["lower"]["label"] == rep["endpoints"]["upper"]["label"] == "degenerate"

    H = KreinSpace.hilbert(2)
    path = tmp_path / "hilbert.json"
    io.write_problem(path, RegularizationProblem(np.eye(2), np.eye(2), H, H, np.zeros(2), np.zeros(2)))
    code, _, err = run(capsys, "classify", path)
    assert code == 1 and "VNotIndefinite" in err
    assert run(capsys, "classify", DATA / "endpoint_qp.json")[0] == 1

    prob, _, _ = random_regularization_problem(np.random.default_rng(0), 5)
    io.write_problem(path, prob)
    code, out, _ = run(capsys, "classify", path, "--rho-samples", "5", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["consistent"] is True and len(rep["interior"]) == 5


def test_reduce_diag_oracle(capsys):
    code, out, _ = run(capsys, "reduce", DATA / "identity2.json", DATA / "signature2.json", "--rho", "0", "--json")
    rep = json.loads(out)
    assert code == 0 and np.allclose(rep["G"], np.diag([1, -1]))
    assert rep["shifted"]["lambda_minus"] == pytest.approx(-1) and rep["shifted"]["lambda_plus"] == pytest.approx(1)
    assert run(capsys, "reduce", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--rho", "1")[0] == 1

    code, out, _ = run(capsys, "diag", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--lam", "1.5", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["identity_verified"] is True
    assert np.allclose(rep["d"], [-2, -2, 2, 2])

    code, out, _ = run(capsys, "oracle", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--json", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["agree"] is True and rep["seed"] == 7
    assert run(capsys, "oracle", DATA / "blocksig_A.json", DATA / "blocksig_B.json", "--seed", str(2**64))[0] == 1


def test_text_output(capsys):
    code, out, _ = run(capsys, "solve", DATA / "cone_qp.json")
    assert code == 0 and out.startswith("GlobalMin")


# --- round trip -------------------------------------------------------------

doubles = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=doubles))
def test_matrix_round_trip(tmp_path, M):
    if M.shape[0] == M.shape[1]:
        M = np.triu(M) + np.triu(M, 1).T
    payload = json.loads(io.dumps(io.matrix_to_payload(M)))
    back = io.matrix_from_payload(payload, symmetric=M.shape[0] == M.shape[1] and np.all(np.isfinite(M)))
    assert np.array_equal(back, M)
    assert all(math.copysign(1, a) == math.copysign(1, b) for a, b in zip(back.ravel(), M.ravel()))


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 2**32 - 1))
def test_problem_round_trip(tmp_path, seed):
    rng = np.random.default_rng(seed)
    prob, _, _ = random_regularization_problem(rng, int(rng.integers(3, 6)))
    path = tmp_path / "reg.json"
    io.write_problem(path, prob, rho=float(rng.standard_normal()))
    back, rho = io.read_problem(path)
    for name in ("T", "V", "w0", "z0"):
        assert np.array_equal(getattr(back, name), getattr(prob, name))
    assert np.array_equal(back.K.J, prob.K.J) and np.array_equal(back.E.J, prob.E.J)
    assert rho is not None

    A = rng.standard_normal((4, 4))
    qp = QP1EQCProblem(A + A.T, np.diag([1.0, -2, 3, -4]), rng.standard_normal(4), rng.standard_normal(4))
    io.write_problem(path, qp)
    back, rho = io.read_problem(path)
    assert rho is None
    for name in ("A", "B", "w0", "z0"):
        assert np.array_equal(getattr(back, name), getattr(qp, name))


def test_payload_validation():
    with pytest.raises(NotSymmetric):
        io.matrix_from_payload({"n": 2, "data": [1, 2, 3, 4]})
    with pytest.raises(ValueError):
        io.matrix_from_payload({"n": 2, "data": [1, "x", 3, 4]})
    with pytest.raises(ValueError):
        io.matrix_from_payload({"data": [1]})
    with pytest.raises(ValueError):
        io.problem_from_payload({"T": 1})
    payload = io.problem_to_payload(block_signature_regularization(), rho=1.5)
    assert set(payload) == {"T", "V", "J_K", "J_E", "w0", "z0", "rho"}
    assert set(io.problem_to_payload(endpoint_qp())) == {"A", "B", "w0", "z0"}
