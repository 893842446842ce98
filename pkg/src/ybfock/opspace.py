"""Column/row min norms in T-orthonormal coordinates and the Khintchine-type checks.

An element of ``M_p (x) H_c^{(x) a} (x) H_r^{(x) b}`` is stored as coefficients
``c[alpha, beta]`` (``p x p``) against ``e_alpha (x) e_beta``.  Its min norm is
the spectral norm of the block matrix

    M~ = (I_p (x) G_a^{1/2}) M (I_p (x) G_b^{1/2}),   M[(i, alpha), (j, beta)] = c[alpha, beta][i, j],

which is the column structure on the ``a`` slot and the row structure on the
``b`` slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import DeformedFockSpace, FockOperator, TruncationError, c_q_constant, creation, annihilation
from .numerics import spectral_norm
from .report import CheckReport
from .wick import wick


@dataclass(frozen=True)
class MatrixValuedTensor:
    a: int
    b: int
    coefficients: np.ndarray  # (d**a, d**b, p, p)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 4 or c.shape[2] != c.shape[3]:
            raise ValueError(f"coefficients must have shape (d^a, d^b, p, p), got {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def p(self) -> int:
        return self.coefficients.shape[2]

    @classmethod
    def from_family(cls, alphas, vectors, a: int, b: int, d: int) -> "MatrixValuedTensor":
        """``sum_i alpha_i (x) v_i`` with ``v_i`` in ``H^{(x) a+b}`` split as ``(a, b)``."""
        alphas = np.asarray(alphas, dtype=complex)
        V = np.asarray(vectors, dtype=complex).reshape(len(alphas), d**a, d**b)
        return cls(a, b, np.einsum("iab,ipq->abpq", V, alphas))

    def block_matrix(self) -> np.ndarray:
        c = self.coefficients
        A, B, p, _ = c.shape
        return c.transpose(2, 0, 3, 1).reshape(p * A, p * B)

    def __add__(self, other: "MatrixValuedTensor") -> "MatrixValuedTensor":
        return MatrixValuedTensor(self.a, self.b, self.coefficients + other.coefficients)

    def __mul__(self, s) -> "MatrixValuedTensor":
        return MatrixValuedTensor(self.a, self.b, s * self.coefficients)

    __rmul__ = __mul__


def orthonormal_block(space: DeformedFockSpace, X: MatrixValuedTensor) -> np.ndarray:
    if X.a + X.b > space.N:
        raise TruncationError(f"degrees {X.a}+{X.b} exceed N={space.N}")
    p = X.p
    L = np.kron(np.eye(p), space.gram(X.a).sqrt)
    R = np.kron(np.eye(p), space.gram(X.b).sqrt)
    return L @ X.block_matrix() @ R


def min_norm_col_row(space: DeformedFockSpace, X: MatrixValuedTensor) -> float:
    return spectral_norm(orthonormal_block(space, X))


def column_norm(space: DeformedFockSpace, alphas, vectors, n: int) -> float:
    """``|| sum_{i,j} <v_i, v_j>_T alpha_i^dagger alpha_j ||^{1/2}``."""
    V = np.asarray(vectors, dtype=complex).reshape(len(alphas), -1)
    G = V.conj() @ space.gram(n).matrix @ V.T
    S = np.einsum("ij,ipq,jqr->pr", G, np.conj(np.transpose(alphas, (0, 2, 1))), np.asarray(alphas))
    return float(np.sqrt(max(np.linalg.eigvalsh(0.5 * (S + S.conj().T))[-1], 0.0)))


def row_norm(space: DeformedFockSpace, alphas, vectors, n: int) -> float:
    """``|| sum_{i,j} <v_i, v_j>_T alpha_i alpha_j^dagger ||^{1/2}``."""
    V = np.asarray(vectors, dtype=complex).reshape(len(alphas), -1)
    G = V.conj() @ space.gram(n).matrix @ V.T
    A = np.asarray(alphas)
    S = np.einsum("ij,ipq,jrq->pr", G, A, A.conj())
    return float(np.sqrt(max(np.linalg.eigvalsh(0.5 * (S + S.conj().T))[-1], 0.0)))


def hilbert_schmidt_norm(space: DeformedFockSpace, X: MatrixValuedTensor) -> float:
    return float(np.linalg.norm(orthonormal_block(space, X)))


# -- operator side ---------------------------------------------------------


def amplified_norm(alphas, ops) -> tuple[float, bool]:
    """``|| sum_i alpha_i (x) X_i ||`` in orthonormal coordinates on ``C^p (x) F_N``.

    Restricts to the common exact columns; returns ``(norm, truncated)``.
    """
    ops = list(ops)
    sp = ops[0].space
    ex = min(o.exact for o in ops)
    if ex < 0:
        raise TruncationError("no exact source level")
    cols = sp.offsets[ex + 1]
    p = np.asarray(alphas[0]).shape[0]
    M = np.zeros((p * sp.dim, p * cols), dtype=complex)
    for a, o in zip(alphas, ops):
        M += np.kron(np.asarray(a, dtype=complex), o.orthonormal()[:, :cols])
    return spectral_norm(M), True


def _params(space: DeformedFockSpace, **extra) -> dict:
    out = {"d": space.d, "N": space.N, "q_bound": space.T.q_bound, "kind": space.T.kind}
    out.update(extra)
    return out


def creation_cb_check(space: DeformedFockSpace, alphas, vectors, n: int, tol: float = 1e-8) -> CheckReport:
    """``|| sum alpha_i (x) a*(xi_i) || <= sqrt(C) * column norm``."""
    ops = [creation(space, v, n) for v in vectors]
    lhs, trunc = amplified_norm(alphas, ops)
    C = c_q_constant(space.T.q_bound)
    col = min_norm_col_row(space, MatrixValuedTensor.from_family(alphas, vectors, n, 0, space.d))
    return CheckReport("creation_cb", lhs=lhs, rhs=np.sqrt(C) * col, tolerance=tol,
                       params=_params(space, n=n, p=len(alphas[0]), C_q=C, anchor="creation_cb_bound"),
                       truncation_flag=trunc, notes="column structure on H^n; lhs is a truncated lower bound")


def annihilation_cb_check(space: DeformedFockSpace, alphas, vectors, n: int, tol: float = 1e-8) -> CheckReport:
    """``|| sum alpha_i (x) a(xi_i) || <= sqrt(C) * row norm``."""
    ops = [annihilation(space, v, n) for v in vectors]
    lhs, trunc = amplified_norm(alphas, ops)
    C = c_q_constant(space.T.q_bound)
    row = row_norm(space, alphas, vectors, n)
    return CheckReport("annihilation_cb", lhs=lhs, rhs=np.sqrt(C) * row, tolerance=tol,
                       params=_params(space, n=n, p=len(alphas[0]), C_q=C, anchor="annihilation_cb_bound"),
                       truncation_flag=trunc, notes="row structure on conj(H)^n; lhs is a truncated lower bound")


def reshaped_norms(space: DeformedFockSpace, alphas, vectors, n: int, slot_map=None) -> list[float]:
    """``|| (Id (x) R*_{n,k}) (sum alpha_i (x) xi_i) ||_min`` for ``k = 0..n``.

    ``slot_map(k)`` optionally post-composes a linear map on the length-``k``
    slot (free coordinates).
    """
    d = space.d
    V = np.asarray(vectors, dtype=complex).reshape(len(alphas), d**n)
    out = []
    for k in range(n + 1):
        Y = V @ space.r_star(n, k).T
        if slot_map is not None:
            L = np.kron(np.eye(d ** (n - k)), slot_map(k))
            Y = Y @ L.T
        out.append(min_norm_col_row(space, MatrixValuedTensor.from_family(alphas, Y, n - k, k, d)))
    return out


def wick_amplified_norm(space: DeformedFockSpace, alphas, vectors, n: int) -> float:
    ops = [wick(space, v, n) for v in vectors]
    return amplified_norm(alphas, ops)[0]


def khintchine_deformed_check(space: DeformedFockSpace, alphas, vectors, n: int, tol: float = 1e-9,
                              constant: float | None = None, slot_map=None, name: str = "khintchine_deformed"):
    """Both sides of ``max_k ||(Id (x) R*_{n,k}) xi|| <= ||(Id (x) W) xi|| <= C (n+1) max_k ...``.

    Returns ``(lower, upper, data)``; ``data`` holds the per-``k`` reshaped norms
    and the middle term.
    """
    lhs_k = reshaped_norms(space, alphas, vectors, n, slot_map)
    middle = wick_amplified_norm(space, alphas, vectors, n)
    C = c_q_constant(space.T.q_bound) if constant is None else constant
    m = max(lhs_k)
    params = _params(space, n=n, p=int(np.asarray(alphas).shape[1]), C_q=C, anchor="vector_valued_khintchine")
    lower = CheckReport(f"{name}_lower", lhs=m, rhs=middle, tolerance=tol, params=params, truncation_flag=True,
                        notes="middle term is a truncated lower bound; consistency at this N, not a proof")
    upper = CheckReport(f"{name}_upper", lhs=middle, rhs=C * (n + 1) * m, tolerance=tol, params=params,
                        truncation_flag=True, notes="upper constant C(n+1), C evaluated at ||T||")
    return lower, upper, {"reshaped": lhs_k, "middle": middle}


def khintchine_free_check(space: DeformedFockSpace, alphas, n: int, tol: float = 1e-9):
    """The free case: coefficients ``alpha_i`` against ``e_i``, bounds ``max_k ||(alpha_{j,l})||`` and ``(n+1)`` times it."""
    if space.T.q_bound != 0.0:
        raise ValueError("the free Khintchine check needs T = 0")
    d = space.d
    A = np.asarray(alphas, dtype=complex)
    if A.shape[0] != d**n:
        raise ValueError(f"need {d**n} coefficients for level {n}")
    p = A.shape[1]
    lhs_k = []
    for k in range(n + 1):
        c = A.reshape(d ** (n - k), d**k, p, p)
        lhs_k.append(spectral_norm(MatrixValuedTensor(n - k, k, c).block_matrix()))
    E = np.eye(d**n, dtype=complex)
    middle = wick_amplified_norm(space, A, E, n)
    m = max(lhs_k)
    params = _params(space, n=n, p=p, anchor="free_khintchine")
    lower = CheckReport("khintchine_free_lower", lhs=m, rhs=middle, tolerance=tol, params=params, truncation_flag=True,
                        notes="max over k of the plain block-matrix norms")
    upper = CheckReport("khintchine_free_upper", lhs=middle, rhs=(n + 1) * m, tolerance=tol, params=params,
                        truncation_flag=True, notes="upper constant n+1")
    return lower, upper, {"reshaped": lhs_k, "middle": middle}


def free_projection_defect(space: DeformedFockSpace, m: int) -> float:
    """``sum_{|j|=m} a*(e_j) a(U e_j)`` minus the projection onto levels ``>= m`` (free case)."""
    from .fock import level_projection, reverse_vector

    d = space.d
    E = np.eye(d**m, dtype=complex)
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(d**m):
        total += (creation(space, E[j], m) @ annihilation(space, reverse_vector(E[j], d, m), m)).mat
    P = level_projection(space, range(m, space.N + 1)).mat
    return float(np.max(np.abs(total - P)))


def operator_block_norm(X: FockOperator, target: int, source: int) -> float:
    sp = X.space
    return spectral_norm(sp.gram(target).sqrt @ X.block(target, source) @ sp.gram(source).inv_sqrt)
