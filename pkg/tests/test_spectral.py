import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pencilqp import spectral
from pencilqp.config import DEFAULT_TOL, ToleranceConfig
from pencilqp.errors import DimensionMismatch, NotPSD, NotSymmetric
from pencilqp.spectral import PSDStatus

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def symmetric(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    X = draw(arrays(float, (n, n), elements=finite))
    return (X + X.T) / 2


def test_sym_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        spectral.sym([[1.0, 2.0], [0.0, 1.0]])


def test_sym_symmetrizes_within_tolerance():
    M = spectral.sym([[1.0, 2.0 + 1e-13], [2.0, 1.0]])
    assert np.array_equal(M, M.T)


def test_sym_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        spectral.sym(np.ones((2, 3)))


def test_eig_diagonal():
    w, V = spectral.eig(np.diag([3.0, 1.0]))
    assert np.allclose(w, [1, 3])
    assert np.allclose(np.abs(V), [[0, 1], [1, 0]])


def test_eig_identity():
    w, _ = spectral.eig(np.eye(4))
    assert np.allclose(w, 1)


def test_eig_swap():
    w, V = spectral.eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1, 1])
    ref = np.array([[1, 1], [-1, 1]]) / np.sqrt(2)
    assert np.allclose(np.abs(V), np.abs(ref))


@settings(max_examples=500, deadline=None)
@given(symmetric())
def test_eig_reconstruction(M):
    w, V = spectral.eig(M)
    scale = max(1.0, np.linalg.norm(M))
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(V @ np.diag(w) @ V.T - M) <= 10 * DEFAULT_TOL.eig_tol * scale
    assert np.linalg.norm(M @ V - V @ np.diag(w)) <= DEFAULT_TOL.eig_tol * scale
    assert np.linalg.norm(V.T @ V - np.eye(len(w))) <= DEFAULT_TOL.eig_tol


@pytest.mark.parametrize(
    "M, status",
    [
        (np.diag([1.0, 2.0]), PSDStatus.POSITIVE_DEFINITE),
        (np.diag([0.0, 1.0]), PSDStatus.POSITIVE_SEMIDEFINITE),
        (np.diag([1.0, -1.0]), PSDStatus.INDEFINITE),
        (np.diag([0.0, -1.0]), PSDStatus.NEGATIVE_SEMIDEFINITE),
        (np.diag([-3.0, -1.0]), PSDStatus.NEGATIVE_DEFINITE),
    ],
)
def test_psd_status(M, status):
    got, lo = spectral.psd_status(M)
    assert got is status
    assert lo == pytest.approx(np.min(np.diag(M)))


def test_sqrt_examples():
    assert np.allclose(spectral.sqrt_psd(np.diag([4.0, 9.0])), np.diag([2, 3]))
    assert np.allclose(spectral.sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(spectral.sqrt_psd(np.diag([4.0, 0.0])), np.diag([2, 0]))
    assert np.allclose(spectral.sqrt_psd(np.diag([4.0, -1e-12])), np.diag([2, 0]))


def test_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        spectral.sqrt_psd(np.diag([1.0, -1e-3]))


@settings(max_examples=100, deadline=None)
@given(symmetric(8))
def test_sqrt_squares_back_and_commutes(X):
    M = X @ X
    R = spectral.sqrt_psd(M)
    tol = 10 * DEFAULT_TOL.eig_tol * max(1.0, np.linalg.norm(M))
    # clamping tiny negative eigenvalues perturbs R by at most sqrt(psd_tol * scale)
    tol = max(tol, 2 * DEFAULT_TOL.psd_tol * max(1.0, np.linalg.norm(M)))
    assert np.linalg.norm(R @ R - M) <= tol
    assert np.linalg.norm(R @ M - M @ R) <= tol * max(1.0, np.linalg.norm(R))
    assert spectral.eigvalsh(R)[0] >= -DEFAULT_TOL.eig_tol * max(1.0, np.linalg.norm(R))


def test_pinv_examples():
    assert np.allclose(spectral.pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0]))
    assert np.allclose(spectral.pinv(np.eye(3)), np.eye(3))
    assert np.allclose(spectral.pinv(np.diag([4.0, -2.0])), np.diag([0.25, -0.5]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**32 - 1))
def test_pinv_moore_penrose(n, r, seed):
    rng = np.random.default_rng(seed)
    r = min(r, n)
    X = rng.standard_normal((n, r))
    M = X @ np.diag(rng.choice([-1.0, 1.0], r)) @ X.T
    P = spectral.pinv(M)
    s = max(1.0, np.linalg.norm(M)) * max(1.0, np.linalg.norm(P))
    assert np.linalg.norm(M @ P @ M - M) <= 1e-8 * s * max(1.0, np.linalg.norm(M))
    assert np.linalg.norm(P @ M @ P - P) <= 1e-8 * s * max(1.0, np.linalg.norm(P))
    assert np.linalg.norm(M @ P - (M @ P).T) <= 1e-8 * s
    assert np.linalg.norm(P @ M - (P @ M).T) <= 1e-8 * s


def test_range_included_examples():
    assert spectral.range_included(np.diag([1.0, 0.0]), np.eye(2))
    assert not spectral.range_included(np.eye(2), np.diag([1.0, 0.0]))
    assert spectral.range_included(np.array([1.0, 1.0]), np.array([2.0, 2.0]))


def test_range_included_dimension_check():
    with pytest.raises(DimensionMismatch):
        spectral.range_included(np.ones((3, 1)), np.ones((2, 2)))


def _douglas(Bm, Am):
    # R(B) ⊆ R(A) iff B Bᵀ ⪯ c A Aᵀ for some c, iff the part of B outside R(A) vanishes
    U, sv, _ = np.linalg.svd(Am)
    Ua = U[:, sv > 1e-6]
    return np.linalg.norm(Bm - Ua @ (Ua.T @ Bm)) <= 1e-8 * max(1.0, np.linalg.norm(Bm))


def _low_rank(rng, n, r):
    # singular values bounded away from 0 so the rank decision is unambiguous
    U = np.linalg.qr(rng.standard_normal((n, n)))[0][:, :r]
    W = np.linalg.qr(rng.standard_normal((n, n)))[0][:, :r]
    return U @ np.diag(rng.uniform(0.5, 2.0, r)) @ W.T


def test_range_included_matches_douglas(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        ra, rb = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
        Am = _low_rank(rng, n, ra)
        if rng.random() < 0.5:
            Bm = Am @ _low_rank(rng, n, rb)
        else:
            Bm = _low_rank(rng, n, rb)
        assert spectral.range_included(Bm, Am) == _douglas(Bm, Am)


def test_subspace_helpers():
    A = np.diag([1.0, 0.0, 0.0])
    B = np.diag([0.0, 1.0, 0.0])
    K = spectral.joint_kernel(A, B, 1e-9)
    assert K.shape == (3, 1)
    assert np.allclose(np.abs(K[:, 0]), [0, 0, 1])
    C = spectral.orth_complement(K, 3)
    assert C.shape == (3, 2)
    assert spectral.subspace_distance(K, np.array([[0.0], [0.0], [-1.0]])) < 1e-12
    assert spectral.subspace_distance(K, C) == 1.0
    assert spectral.rank(A + B, 1e-9) == 2
    assert spectral.range_basis(A, 1e-9).shape == (3, 1)
    assert spectral.null_space(A, 1e-9).shape == (3, 2)


def test_inv_sqrt_pd():
    S = spectral.inv_sqrt_pd(np.diag([4.0, 0.25]))
    assert np.allclose(S, np.diag([0.5, 2.0]))
    with pytest.raises(NotPSD):
        spectral.inv_sqrt_pd(np.diag([1.0, 0.0]))


def test_tolerance_config(monkeypatch):
    with pytest.raises(ValueError):
        ToleranceConfig(psd_tol=0.0)
    cfg = DEFAULT_TOL.with_tol(1e-6)
    assert cfg.root_tol == cfg.psd_tol == 1e-6
    monkeypatch.setenv("PENCILQP_TOL", "1e-5")
    env = ToleranceConfig.from_env()
    assert env.root_tol == env.psd_tol == 1e-5
    assert env.rank_tol == DEFAULT_TOL.rank_tol
