import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ybfock import deformation as D
from ybfock import fock as F
from ybfock import opspace as O
from ybfock.rng import SplitMix64
from ybfock.witness import t_orthonormal_basis


def space(q=0.5, N=4, d=2):
    return F.DeformedFockSpace(D.make_q_flip(d, q), N)


def test_elementary_tensor_unit_norm():
    sp = space()
    r = SplitMix64(1)
    u = r.complex(4)
    u = u / sp.norm(u, 2)
    v = r.complex(2)
    v = v / sp.norm(v, 1)
    X = O.MatrixValuedTensor(2, 1, np.kron(u, v).reshape(4, 2, 1, 1))
    assert O.min_norm_col_row(sp, X) == pytest.approx(1.0)


def test_column_route_matches_reshaping():
    sp = space()
    r = SplitMix64(2)
    A = r.complex((3, 2, 2))
    V = r.complex((3, 4))
    X = O.MatrixValuedTensor.from_family(A, V, 2, 0, 2)
    assert O.min_norm_col_row(sp, X) == pytest.approx(O.column_norm(sp, A, V, 2), rel=1e-12)


def test_row_route_matches_reshaping_on_conjugates():
    sp = space()
    r = SplitMix64(3)
    A = r.complex((3, 2, 2))
    V = r.complex((3, 4))
    X = O.MatrixValuedTensor.from_family(A, V.conj(), 0, 2, 2)
    assert O.min_norm_col_row(sp, X) == pytest.approx(O.row_norm(sp, A, V, 2), rel=1e-12)


def test_free_min_norm_is_plain_block_norm():
    sp = space(q=0.0)
    r = SplitMix64(4)
    c = r.complex((4, 2, 3, 3))
    X = O.MatrixValuedTensor(2, 1, c)
    assert O.min_norm_col_row(sp, X) == pytest.approx(np.linalg.norm(X.block_matrix(), 2))


def test_single_vector_column_is_t_norm():
    sp = space()
    v = SplitMix64(5).complex(8)
    X = O.MatrixValuedTensor(3, 0, v.reshape(8, 1, 1, 1))
    assert O.min_norm_col_row(sp, X) == pytest.approx(sp.norm(v, 3))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(-3, 3))
def test_min_norm_is_a_norm(seed, s):
    sp = space()
    r = SplitMix64(seed)
    X = O.MatrixValuedTensor(1, 1, r.complex((2, 2, 2, 2)))
    Y = O.MatrixValuedTensor(1, 1, r.complex((2, 2, 2, 2)))
    nx, ny = O.min_norm_col_row(sp, X), O.min_norm_col_row(sp, Y)
    assert O.min_norm_col_row(sp, X + Y) <= nx + ny + 1e-12
    assert O.min_norm_col_row(sp, s * X) == pytest.approx(abs(s) * nx, rel=1e-12, abs=1e-14)
    assert nx > 0
    assert O.min_norm_col_row(sp, 0 * X) == 0
    assert nx <= O.hilbert_schmidt_norm(sp, X) + 1e-12


def test_hilbert_schmidt_rearrangement_invariance():
    c = SplitMix64(6).complex((2, 2, 2, 2))
    base = np.linalg.norm(c)
    for perm in [(1, 0, 2, 3), (3, 2, 1, 0), (0, 2, 1, 3)]:
        assert np.linalg.norm(c.transpose(perm).reshape(4, 4)) == pytest.approx(base)


def test_creation_cb_examples():
    sp = space(q=0.5, N=4)
    xi = SplitMix64(7).complex(2)
    xi = xi / sp.norm(xi, 1)
    rep = O.creation_cb_check(sp, [np.eye(1)], [xi], 1)
    assert rep.lhs <= np.sqrt(F.c_q_constant(0.5)) + 1e-10 and rep.passed
    free = space(q=0.0, N=4)
    units = [np.outer(np.eye(2)[0], np.eye(2)[i]) for i in range(2)]
    rep = O.creation_cb_check(free, units, list(np.eye(2, dtype=complex)), 1)
    assert rep.lhs == pytest.approx(1.0) and rep.rhs == pytest.approx(1.0)


def test_cb_checks_random_batch():
    sp = space(q=0.5, N=4)
    r = SplitMix64(8)
    for _ in range(5):
        A = r.complex((3, 2, 2))
        V = r.complex((3, 4))
        assert O.creation_cb_check(sp, A, V, 2).slack >= -1e-8
        assert O.annihilation_cb_check(sp, A, V, 2).slack >= -1e-8


def test_khintchine_free_examples():
    d = 3
    sp = space(q=0.0, N=3, d=d)
    lo, up, data = O.khintchine_free_check(sp, np.ones((d, 1, 1)), 1)
    assert lo.lhs == pytest.approx(np.sqrt(d))
    assert data["reshaped"] == pytest.approx([np.sqrt(d), np.sqrt(d)])
    lo, up, data = O.khintchine_free_check(sp, np.array([[[2.0 - 1j]]]), 0)
    assert lo.lhs == pytest.approx(abs(2 - 1j)) and data["middle"] == pytest.approx(abs(2 - 1j))
    assert up.rhs == pytest.approx(abs(2 - 1j))
    sp = space(q=0.0, N=5)
    lo, up, _ = O.khintchine_free_check(sp, SplitMix64(9).complex((8, 2, 2)), 3)
    assert lo.slack >= -1e-9 and up.slack >= -1e-9
    with pytest.raises(ValueError):
        O.khintchine_free_check(space(q=0.5), np.ones((2, 1, 1)), 1)


def test_deformed_reduces_to_free_at_q_zero():
    sp = space(q=0.0, N=4)
    A = SplitMix64(10).complex((4, 2, 2))
    f = O.khintchine_free_check(sp, A, 2)[2]
    g = O.khintchine_deformed_check(sp, A, np.eye(4, dtype=complex), 2)[2]
    assert np.allclose(f["reshaped"], g["reshaped"], atol=1e-12)
    assert f["middle"] == pytest.approx(g["middle"], abs=1e-12)


def test_deformed_scalar_case_matches_bozejko_shape():
    sp = space(q=0.5, N=4)
    Xi = t_orthonormal_basis(sp, 2).T
    alpha = SplitMix64(11).complex((4, 1, 1))
    lo, up, data = O.khintchine_deformed_check(sp, alpha, Xi, 2)
    xi = np.tensordot(alpha[:, 0, 0], Xi, axes=1)
    # k = 0 and k = n reshapings are the column and row norms, each the T-norm of xi
    assert data["reshaped"][0] == pytest.approx(sp.norm(xi, 2), rel=1e-10)
    assert data["middle"] >= sp.norm(xi, 2) - 1e-10
    assert lo.passed and up.passed


@pytest.mark.parametrize("q", [0.5, -0.5])
def test_deformed_random(q):
    r = SplitMix64(12)
    for n in range(1, 4):
        sp = space(q=q, N=n + 2)
        Xi = t_orthonormal_basis(sp, n).T
        lo, up, _ = O.khintchine_deformed_check(sp, r.complex((2**n, 2, 2)), Xi, n)
        assert up.slack >= -1e-9
        assert lo.slack >= -1e-9


def test_amplified_norm_restricts_to_exact_columns():
    sp = space(q=0.5, N=3)
    op = F.annihilation(sp, np.eye(2)[0]) @ F.creation(sp, np.eye(2)[0])
    val, trunc = O.amplified_norm([np.eye(1)], [op])
    assert trunc
    assert val == pytest.approx(op.norm())
