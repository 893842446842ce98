"""Yang-Baxter operators and their quasi-multiplicative extension.

``T`` is stored as a ``d**2 x d**2`` matrix in the basis ``e_i (x) e_j`` with
flat index ``i*d + j``, so ``T[s*d + r, i*d + j] = <e_s (x) e_r, T(e_i (x) e_j)>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import symgroup
from .numerics import hermitian_defect, spectral_norm

BRAID_TOL = 1e-10
HERM_TOL = 1e-12


class DeformationError(ValueError):
    pass


def flip(d: int) -> np.ndarray:
    """The tensor flip ``e_i (x) e_j -> e_j (x) e_i`` on ``C^d (x) C^d``."""
    F = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            F[j * d + i, i * d + j] = 1.0
    return F


def _dim_of(M: np.ndarray) -> int:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DeformationError(f"T must be square, got shape {M.shape}")
    d = int(round(np.sqrt(M.shape[0])))
    if d * d != M.shape[0]:
        raise DeformationError(f"dimension {M.shape[0]} is not a perfect square")
    return d


def local_right(M: np.ndarray, T: np.ndarray, k: int, n: int, d: int) -> np.ndarray:
    """``M @ T_k`` with ``T_k = I^{k-1} (x) T (x) I^{n-k-1}``, without forming ``T_k``."""
    rows = M.shape[0]
    X = M.reshape(rows, d ** (k - 1), d * d, d ** (n - k - 1))
    return np.einsum("xabc,bz->xazc", X, T).reshape(rows, d**n)


def local_left(T: np.ndarray, M: np.ndarray, k: int, n: int, d: int) -> np.ndarray:
    """``T_k @ M``."""
    cols = M.shape[1]
    X = M.reshape(d ** (k - 1), d * d, d ** (n - k - 1), cols)
    return np.einsum("zb,abcx->azcx", T, X).reshape(d**n, cols)


def extend(T: np.ndarray, k: int, n: int) -> np.ndarray:
    """The matrix ``T_k`` on ``H^{(x) n}``."""
    d = _dim_of(T)
    return np.kron(np.kron(np.eye(d ** (k - 1)), T), np.eye(d ** (n - k - 1)))


def check_braid(T) -> float:
    """Frobenius norm of ``(I(x)T)(T(x)I)(I(x)T) - (T(x)I)(I(x)T)(T(x)I)``."""
    T = np.asarray(T, dtype=complex)
    d = _dim_of(T)
    A = np.kron(T, np.eye(d))
    B = np.kron(np.eye(d), T)
    return float(np.linalg.norm(B @ A @ B - A @ B @ A))


def coefficients(T) -> np.ndarray:
    """``t[s, r, i, j] = <e_s (x) e_r, T(e_i (x) e_j)>``."""
    T = np.asarray(T, dtype=complex)
    d = _dim_of(T)
    return T.reshape(d, d, d, d)


def _tracial_residual(T: np.ndarray) -> float:
    t = coefficients(T)
    # cyclic condition t^{sr}_{ij} = t^{rj}_{si}
    cyc = np.einsum("rjsi->srij", t)
    return float(np.max(np.abs(t - cyc))) if t.size else 0.0


def _monomial_weights(T: np.ndarray, d: int, tol: float = 1e-14):
    """Return ``Q`` if ``T e_i(x)e_j = Q_ij e_j(x)e_i``, else ``None``."""
    Q = np.zeros((d, d), dtype=complex)
    mask = np.zeros_like(T, dtype=bool)
    for i in range(d):
        for j in range(d):
            Q[i, j] = T[j * d + i, i * d + j]
            mask[j * d + i, i * d + j] = True
    if np.max(np.abs(np.where(mask, 0, T)), initial=0.0) > tol:
        return None
    return Q


@dataclass(frozen=True, eq=False)
class YangBaxterOperator:
    """A validated self-adjoint strict contraction obeying the braid relation.

    Use :func:`make_q_flip`, :func:`make_qij` or :func:`from_matrix`; the
    constructors run every invariant check and refuse on failure.
    """

    d: int
    matrix: np.ndarray
    q_bound: float
    braid_residual: float
    tracial_residual: float
    tracial: bool
    kind: str = "custom"
    monomial: np.ndarray | None = field(default=None, repr=False)

    def t(self, s: int, r: int, i: int, j: int) -> complex:
        return complex(self.matrix[s * self.d + r, i * self.d + j])

    @cached_property
    def coefficient_tensor(self) -> np.ndarray:
        return coefficients(self.matrix)


def from_matrix(
    T,
    kind: str = "custom",
    braid_tol: float = BRAID_TOL,
    herm_tol: float = HERM_TOL,
    tracial_tol: float = 1e-12,
) -> YangBaxterOperator:
    """Validate a candidate ``T`` and wrap it."""
    T = np.array(T, dtype=complex)
    d = _dim_of(T)
    if not np.all(np.isfinite(T)):
        raise DeformationError("T has non-finite entries")
    herm = hermitian_defect(T)
    if herm > herm_tol:
        raise DeformationError(f"T is not self-adjoint (defect {herm:.3e})")
    T = 0.5 * (T + T.conj().T)
    q = spectral_norm(T)
    if not q < 1.0:
        raise DeformationError(f"T is not a strict contraction (norm {q:.6g})")
    braid = check_braid(T)
    if braid > braid_tol:
        raise DeformationError(f"braid relation fails (residual {braid:.3e})")
    trac = _tracial_residual(T)
    return YangBaxterOperator(
        d=d,
        matrix=T,
        q_bound=q,
        braid_residual=braid,
        tracial_residual=trac,
        tracial=trac <= tracial_tol,
        kind=kind,
        monomial=_monomial_weights(T, d),
    )


def make_q_flip(d: int, q: float) -> YangBaxterOperator:
    """``T = q * flip``, the q-deformation."""
    if d < 1:
        raise DeformationError("d must be at least 1")
    if not abs(q) < 1:
        raise DeformationError(f"|q| must be < 1, got {q}")
    return from_matrix(q * flip(d), kind="q_flip")


def make_qij(Q) -> YangBaxterOperator:
    """``T(e_i (x) e_j) = Q_ij e_j (x) e_i`` for a Hermitian ``Q`` with ``sup |Q_ij| < 1``."""
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DeformationError(f"Q must be square, got shape {Q.shape}")
    if hermitian_defect(Q) > HERM_TOL:
        raise DeformationError("Q is not Hermitian")
    if not np.max(np.abs(Q)) < 1:
        raise DeformationError("sup |q_ij| must be < 1")
    d = Q.shape[0]
    T = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            T[j * d + i, i * d + j] = Q[i, j]
    return from_matrix(T, kind="q_matrix")


def check_tracial(T: YangBaxterOperator) -> float:
    """``max |t^{sr}_{ij} - t^{rj}_{si}|``."""
    return _tracial_residual(T.matrix)


def phi_word(T: YangBaxterOperator, word, n: int) -> np.ndarray:
    """``T_{k_1} ... T_{k_m}`` on ``H^{(x) n}``."""
    out = np.eye(T.d**n, dtype=complex)
    for k in word:
        out = local_right(out, T.matrix, k, n, T.d)
    return out


def phi(T: YangBaxterOperator, sigma, n: int | None = None, braid_tol: float = BRAID_TOL) -> np.ndarray:
    """Quasi-multiplicative extension ``phi(sigma)`` along a reduced word."""
    sigma = symgroup.validate(sigma)
    if n is not None and n != len(sigma):
        raise DeformationError(f"permutation of length {len(sigma)} used at level {n}")
    if T.braid_residual > braid_tol:
        raise DeformationError("phi is ill-defined: braid residual above tolerance")
    return phi_word(T, symgroup.reduced_word(sigma), len(sigma))
