import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ybfock import deformation as D
from ybfock import fock as F
from ybfock import symgroup as sg
from ybfock.numerics import GramForm, weighted_operator_norm
from ybfock.rng import SplitMix64
from ybfock.suites import commutation_residual

Q_REAL = np.array([[0.3, 0.5], [0.5, -0.2]])
Q_COMPLEX = np.array([[0.3, 0.2 + 0.1j], [0.2 - 0.1j, -0.4]])


def brute_symmetrizer(T, n):
    out = np.zeros((T.d**n, T.d**n), dtype=complex)
    for sigma in sg.all_permutations(n):
        out += D.phi_word(T, sg.reduced_word_left(sigma), n)
    return out


def test_symmetrizer_small_levels():
    T = D.make_q_flip(2, 0.5)
    assert np.allclose(F.symmetrizer(T, 1), np.eye(2))
    assert np.allclose(F.symmetrizer(T, 2), np.eye(4) + T.matrix)
    assert np.allclose(sorted(np.linalg.eigvalsh(F.symmetrizer(T, 2))), [0.5, 1.5, 1.5, 1.5])


@pytest.mark.parametrize("T", [D.make_q_flip(2, 0.5), D.make_qij(Q_COMPLEX), D.make_q_flip(3, -0.3)],
                         ids=["qflip", "qij_complex", "qflip3"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_symmetrizer_matches_brute_force(T, n):
    assert np.allclose(F.symmetrizer(T, n), brute_symmetrizer(T, n), atol=1e-12)


def test_generic_path_matches_monomial_path():
    T = D.make_qij(Q_COMPLEX)
    Tg = D.from_matrix(T.matrix)
    object.__setattr__(Tg, "monomial", None)
    for n in range(2, 5):
        assert np.allclose(F.symmetrizer(T, n), F._symmetrizer_generic(Tg, n), atol=1e-12)


def test_r_nk_examples():
    T = D.make_q_flip(2, 0.5)
    assert np.allclose(F.r_nk(T, 3, 0), np.eye(8))
    assert np.allclose(F.r_nk(T, 2, 1), np.eye(4) + T.matrix)
    P3 = F.symmetrizer(T, 3)
    R = F.r_nk(T, 3, 1) @ np.kron(F.symmetrizer(T, 2), np.eye(2))
    assert np.max(np.abs(P3 - R)) < 1e-12


@pytest.mark.parametrize("q", [-0.5, 0.5, 0.9])
def test_recursive_symmetrizer(q):
    T = D.make_q_flip(2, q)
    for n in range(6):
        assert np.linalg.norm(F.symmetrizer_recursive(T, n) - F.symmetrizer(T, n)) < 1e-10 * max(
            1, np.linalg.norm(F.symmetrizer(T, n)))


def test_recursive_symmetrizer_level_ten():
    T = D.make_q_flip(2, 0.5)
    P = F.symmetrizer_recursive(T, 10)
    assert P.shape == (1024, 1024)
    assert np.allclose(P, P.conj().T)
    assert np.linalg.eigvalsh(P)[0] > 0


def test_c_q_values():
    assert F.c_q_constant(0.0) == 1.0
    # independent oracle: the log-sum series -sum log(1 - q^n) summed with fsum
    import math

    ref = math.exp(-math.fsum(math.log1p(-(0.5**n)) for n in range(1, 200)))
    assert F.c_q_constant(0.5) == pytest.approx(ref, rel=1e-14)
    assert F.c_q_constant(0.5) == pytest.approx(3.4627466, abs=1e-6)
    big = F.c_q_constant(0.9)
    ref9 = math.exp(-math.fsum(math.log1p(-(0.9**n)) for n in range(1, 2000)))
    assert big == pytest.approx(ref9, rel=1e-12)
    with pytest.raises(ValueError):
        F.c_q_constant(1.0)


def test_domination_examples():
    T = D.make_q_flip(2, 0.5)
    assert F.domination_constants(T, 3, 0) == pytest.approx((1.0, 1.0))
    c_up, d_low = F.domination_constants(T, 3, 1)
    assert c_up <= F.c_q_constant(0.5) + 1e-8
    for n in range(1, 6):
        for k in range(n + 1):
            c_up, d_low = F.domination_constants(T, n, k)
            assert 0 < d_low < np.inf and c_up <= F.c_q_constant(0.5) + 1e-8


def test_space_structure():
    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 4)
    assert sp.dim == 1 + 2 + 4 + 8 + 16
    assert sp.level_of_index(0) == 0 and sp.level_of_index(3) == 2
    assert np.allclose(sp.gram(0).matrix, [[1]])
    assert np.allclose(sp.gram(1).matrix, np.eye(2))
    for n in range(5):
        U = sp.reversal(n)
        assert np.max(np.abs(U @ sp.symmetrizers[n] - sp.symmetrizers[n] @ U)) < 1e-12
    assert np.allclose(sp.reversal(1), np.eye(2))
    assert np.allclose(sp.reversal(2), D.flip(2))


def test_creation_annihilation_examples():
    T = D.make_q_flip(2, 0.5)
    sp = F.DeformedFockSpace(T, 4)
    e1, e2 = np.eye(2, dtype=complex)
    Om = sp.vacuum()
    assert np.allclose(F.creation(sp, e1).apply(Om), sp.embed(e1, 1))
    a12 = F.creation(sp, np.kron(e1, e2), 2)
    assert np.allclose(a12.apply(Om), sp.embed(np.kron(e1, e2), 2))
    assert np.allclose((F.creation(sp, e1) @ F.creation(sp, e2)).mat, a12.mat)
    assert np.allclose(F.annihilation(sp, e1).apply(Om), 0)
    v = sp.embed(np.kron(e1, e2), 2)
    assert np.allclose(F.annihilation(sp, e1).apply(v), sp.embed(e2, 1))
    assert np.allclose(F.annihilation(sp, e2).apply(v), sp.embed(0.5 * e1, 1))


def test_q_annihilator_expansion():
    # a(f)(f_1 x ... x f_n) = sum_k q^{k-1} <f, f_k> f_1 x .. ^f_k .. x f_n
    q = 0.3
    sp = F.DeformedFockSpace(D.make_q_flip(2, q), 4)
    r = SplitMix64(2)
    f = r.complex(2)
    fs = [r.complex(2) for _ in range(3)]
    vec = np.kron(fs[0], np.kron(fs[1], fs[2]))
    out = F.annihilation(sp, f).apply(sp.embed(vec, 3))[sp.sl(2)]
    ref = np.zeros(4, dtype=complex)
    for k in range(3):
        rest = [fs[j] for j in range(3) if j != k]
        ref += q**k * np.vdot(f, fs[k]) * np.kron(rest[0], rest[1])
    assert np.allclose(out, ref)


@pytest.mark.parametrize("T", [D.make_q_flip(2, 0.5), D.make_qij(Q_COMPLEX)], ids=["qflip", "qij_complex"])
def test_creation_adjoint_is_reversed_annihilation(T):
    sp = F.DeformedFockSpace(T, 4)
    r = SplitMix64(5)
    for n in (1, 2):
        xi = r.complex(T.d**n)
        lhs = F.creation(sp, xi, n).adjoint()
        rhs = F.annihilation(sp, F.reverse_vector(xi, T.d, n), n)
        assert np.allclose(lhs.mat, rhs.mat, atol=1e-12)


def test_creation_norm_bound():
    q = 0.5
    sp = F.DeformedFockSpace(D.make_q_flip(2, q), 4)
    r = SplitMix64(9)
    C = F.c_q_constant(q)
    for n in (1, 2):
        for _ in range(10):
            xi = r.complex(2**n)
            assert F.creation(sp, xi, n).norm() <= np.sqrt(C) * sp.norm(xi, n) + 1e-8


def test_gaussian_properties():
    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 4)
    f = np.array([0.6, 0.8], dtype=complex)
    G = F.gaussian(sp, f)
    assert np.allclose(G.apply(sp.vacuum()), sp.embed(f, 1))
    assert F.vacuum_state(sp, G @ G) == pytest.approx(1.0)
    assert np.max(np.abs((G.adjoint() - G).mat)) < 1e-10


def test_right_creation_and_commutant():
    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 5)
    e1, e2 = np.eye(2, dtype=complex)
    assert np.allclose(F.right_creation(sp, e1).apply(sp.vacuum()), sp.embed(e1, 1))
    g = np.array([0.2, 0.7], dtype=complex)
    assert np.allclose(F.right_creation(sp, e2).apply(sp.embed(g, 1)), sp.embed(np.kron(g, e2), 2))
    r = SplitMix64(4)
    f, h = r.real(2), r.real(2)
    X = F.gaussian(sp, f) @ F.right_gaussian(sp, h) - F.right_gaussian(sp, h) @ F.gaussian(sp, f)
    cols = sp.offsets[sp.N - 1]  # source levels <= N-2
    assert np.max(np.abs(X.orthonormal()[:, :cols])) < 1e-10


def test_vacuum_state_and_trace():
    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 4)
    assert F.vacuum_state(sp, F.identity(sp)) == pytest.approx(1.0)
    from ybfock.wick import wick

    r = SplitMix64(8)
    xi, eta = r.complex(4), r.complex(2)
    W = wick(sp, xi, 2)
    assert F.vacuum_state(sp, W.adjoint() @ W) == pytest.approx(sp.norm(xi, 2) ** 2)
    V = wick(sp, eta, 1)
    assert abs(F.vacuum_state(sp, W @ V) - F.vacuum_state(sp, V @ W)) < 1e-9


@pytest.mark.parametrize("T", [D.make_q_flip(2, 0.5), D.make_q_flip(3, -0.5), D.make_qij(Q_REAL)],
                         ids=["qflip2", "qflip3", "qij_real"])
def test_deformed_commutation(T):
    sp = F.DeformedFockSpace(T, 4 if T.d == 3 else 5)
    assert commutation_residual(sp) < 1e-10


def test_qij_relation_index_pairing():
    # T(e_i x e_j) = q_ij e_j x e_i gives a(e_i)a*(e_j) - q_ji a*(e_j)a(e_i) = delta_ij,
    # which is the printed q_ij form exactly when Q is real
    for Q, expect_printed in ((Q_REAL, True), (Q_COMPLEX, False)):
        sp = F.DeformedFockSpace(D.make_qij(Q), 4)
        E = np.eye(2)
        worst_ji = worst_ij = 0.0
        for i in range(2):
            for j in range(2):
                base = F.annihilation(sp, E[i]) @ F.creation(sp, E[j]) - (i == j) * F.identity(sp)
                M = F.creation(sp, E[j]) @ F.annihilation(sp, E[i])
                for qq, name in ((Q[j, i], "ji"), (Q[i, j], "ij")):
                    X = base - qq * M
                    r = np.max(np.abs(X.mat[:, X.exact_columns()]))
                    if name == "ji":
                        worst_ji = max(worst_ji, r)
                    else:
                        worst_ij = max(worst_ij, r)
        assert worst_ji < 1e-12
        assert (worst_ij < 1e-12) == expect_printed


def test_free_projection_identity():
    from ybfock.opspace import free_projection_defect

    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.0), 4)
    for m in range(1, 5):
        assert free_projection_defect(sp, m) < 1e-12


def test_r_star_norm_bounds():
    for q in (-0.5, 0.5, 0.9):
        T = D.make_q_flip(2, q)
        C = F.c_q_constant(abs(q))
        for n in range(1, 5):
            Gn = GramForm.from_matrix(F.symmetrizer(T, n))
            for k in range(n + 1):
                Gt = GramForm.from_matrix(np.kron(F.symmetrizer(T, n - k), F.symmetrizer(T, k)))
                Rs = F.r_nk_star(T, n, k)
                assert weighted_operator_norm(Rs, Gt, Gn) <= np.sqrt(C) + 1e-8
                assert weighted_operator_norm(Rs, Gn, Gn) <= C + 1e-8


def test_truncation_tags():
    sp = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 4)
    e = np.eye(2)[0]
    a, b = F.creation(sp, e), F.annihilation(sp, e)
    # compressions of single ladder operators are exact; a(e) a*(e) loses level N
    assert a.exact == b.exact == 4
    assert (b @ a).exact == 3
    assert (a @ b).exact == 4
    full = F.DeformedFockSpace(D.make_q_flip(2, 0.5), 5)
    ref = (F.annihilation(full, e) @ F.creation(full, e)).mat[: sp.dim, : sp.dim]
    cols = (b @ a).exact_columns()
    assert np.allclose((b @ a).mat[:, cols], ref[:, cols])
    assert not np.allclose((b @ a).mat, ref)
    # a level above N is dropped entirely: the compression is zero
    assert not np.any(F.creation(sp, np.ones(32), 5).mat)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([-0.5, 0.0, 0.5]))
def test_inner_product_is_gram(seed, q):
    sp = F.DeformedFockSpace(D.make_q_flip(2, q), 3)
    r = SplitMix64(seed)
    u, v = r.complex(8), r.complex(8)
    assert sp.inner(u, v, 3) == pytest.approx(np.vdot(u, sp.symmetrizers[3] @ v))
    assert sp.norm(u, 3) > 0


def test_base_gram_must_commute():
    X = np.array([[2.0, 0.3], [0.3, 1.0]])
    with pytest.raises(ValueError):
        F.DeformedFockSpace(D.make_qij(Q_REAL), 2, base_gram=X)
