import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ybfock.numerics import (
    AntilinearMap,
    GramForm,
    NumericsError,
    PositivityLossError,
    gram_adjoint,
    herm_eigen,
    kron_all,
    kron_power,
    psd_power,
    spectral_norm,
    weighted_operator_norm,
)
from ybfock.deformation import flip
from ybfock.rng import SplitMix64


def hermitian(seed, n):
    X = SplitMix64(seed).complex((n, n))
    return X + X.conj().T


def test_herm_eigen_identity_and_diag():
    w, V = herm_eigen(np.eye(2))
    assert np.allclose(w, [1, 1])
    w, V = herm_eigen(np.diag([1.0, 3.0]))
    assert np.allclose(w, [3, 1])
    assert np.allclose(np.abs(V), [[0, 1], [1, 0]])


def test_herm_eigen_symmetrizer_level_two():
    P = np.eye(4) + 0.5 * flip(2)
    w, _ = herm_eigen(P)
    assert np.allclose(w, [1.5, 1.5, 1.5, 0.5], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 9))
def test_herm_eigen_reconstruction(seed, n):
    M = hermitian(seed, n)
    w, V = herm_eigen(M)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.linalg.norm(V @ np.diag(w) @ V.conj().T - M) <= 1e-10 * np.linalg.norm(M)
    assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-12)


def test_herm_eigen_rejects_bad_input():
    with pytest.raises(NumericsError):
        herm_eigen(np.ones((2, 3)))
    with pytest.raises(NumericsError):
        herm_eigen(np.array([[0, 1], [0, 0]]))


def test_psd_power_examples():
    assert np.allclose(psd_power(np.eye(3), -0.5), np.eye(3))
    assert np.allclose(psd_power(np.diag([4.0, 1.0]), 0.5), np.diag([2.0, 1.0]))
    P = np.eye(4) + 0.5 * flip(2)
    w = np.linalg.eigvalsh(psd_power(P, -0.5))
    assert np.allclose(sorted(w), sorted([1.5**-0.5] * 3 + [0.5**-0.5]), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8))
def test_psd_sqrt_squares_back(seed, n):
    X = SplitMix64(seed).complex((n, n))
    M = X @ X.conj().T + 0.1 * np.eye(n)
    R = psd_power(M, 0.5)
    assert np.linalg.norm(R @ R - M) <= 1e-10 * np.linalg.norm(M)


def test_positivity_loss_raises():
    with pytest.raises(PositivityLossError):
        psd_power(np.diag([1.0, 0.0]), -0.5)
    with pytest.raises(PositivityLossError):
        GramForm.from_matrix(np.diag([1.0, -1e-3]))


def test_weighted_norm_examples():
    G = GramForm.identity(3)
    assert weighted_operator_norm(np.eye(3), G, G) == pytest.approx(1.0)
    assert weighted_operator_norm(2 * np.eye(3), G, G) == pytest.approx(2.0)
    P = GramForm.from_matrix(np.eye(4) + 0.5 * flip(2))
    assert weighted_operator_norm(flip(2), P, P) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_weighted_norm_submultiplicative_and_adjoint(seed):
    r = SplitMix64(seed)
    n = 4
    Y = r.complex((n, n))
    G = GramForm.from_matrix(Y @ Y.conj().T + np.eye(n))
    A, B = r.complex((n, n)), r.complex((n, n))
    nab = weighted_operator_norm(A @ B, G, G)
    assert nab <= weighted_operator_norm(A, G, G) * weighted_operator_norm(B, G, G) * (1 + 1e-10)
    adj = gram_adjoint(A, G, G)
    assert np.allclose(adj, np.linalg.solve(G.matrix, A.conj().T @ G.matrix))
    assert weighted_operator_norm(adj, G, G) == pytest.approx(weighted_operator_norm(A, G, G), rel=1e-10)


def test_weighted_norm_is_sup_over_unit_vectors(rng):
    n = 3
    Y = rng.complex((n, n))
    G = GramForm.from_matrix(Y @ Y.conj().T + np.eye(n))
    X = rng.complex((n, n))
    nrm = weighted_operator_norm(X, G, G)
    for _ in range(50):
        v = rng.complex(n)
        assert G.norm(X @ v) <= nrm * G.norm(v) * (1 + 1e-12)


def test_kron_helpers():
    A, B = np.diag([1.0, 2.0]), np.array([[0, 1], [1, 0]])
    assert np.allclose(kron_all([A, B]), np.kron(A, B))
    assert np.allclose(kron_power(A, 3), np.kron(A, np.kron(A, A)))
    assert kron_power(A, 0).shape == (1, 1)


def test_spectral_norm_matches_svd(rng):
    X = rng.complex((5, 3))
    assert spectral_norm(X) == pytest.approx(np.linalg.svd(X, compute_uv=False)[0])


def test_gram_kron_and_inner(rng):
    A = GramForm.from_matrix(np.diag([1.0, 2.0]))
    B = GramForm.from_matrix(np.diag([3.0, 1.0]))
    K = A.kron(B)
    assert np.allclose(K.matrix, np.kron(A.matrix, B.matrix))
    assert np.allclose(K.sqrt @ K.sqrt, K.matrix)
    u, v = rng.complex(4), rng.complex(4)
    assert K.inner(u, v) == pytest.approx(np.vdot(u, K.matrix @ v))


def test_antilinear_composition(rng):
    M1, M2 = rng.complex((3, 3)), rng.complex((3, 3))
    A, B = AntilinearMap(M1), AntilinearMap(M2)
    v = rng.complex(3)
    assert np.allclose(A(B(v)), A.compose(B) @ v)
    assert np.allclose(A.compose(B), M1 @ M2.conj())
    assert np.allclose(A(2j * v), -2j * A(v))
