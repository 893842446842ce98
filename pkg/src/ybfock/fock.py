"""Truncated deformed Fock space.

Level ``n`` is ``H^{(x) n}`` in free coordinates ``e_I = e_{i_1} (x) ... (x)
e_{i_n}`` with flat index ``sum_a i_a d^{n-1-a}`` (``i_1`` most significant).
Operators are dense matrices over ``sum_{n<=N} d^n`` coordinates; the Gram of
level ``n`` is ``base^{(x) n} P^{(n)}``.

Truncation contract: a truncated operator stores the compression ``P_N X
P_N``.  ``FockOperator.exact`` is the largest source level whose column block
is known to equal the compression of the untruncated operator, so every norm
computed over exact columns is a certified lower bound of the true norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import kernels, symgroup
from .deformation import YangBaxterOperator, local_right, phi_word
from .numerics import (
    AntilinearMap,
    GramForm,
    NumericsError,
    kron_power,
    spectral_norm,
)

MAX_DIRECT = symgroup.MAX_ENUMERATION


class TruncationError(ValueError):
    pass


# -- symmetrizers ----------------------------------------------------------


def _phi_sum(T: YangBaxterOperator, perms, n: int) -> np.ndarray:
    if T.monomial is not None:
        return kernels.monomial_perm_sum(symgroup.as_array(perms).reshape(-1, n), T.monomial, T.d, n)
    out = np.zeros((T.d**n, T.d**n), dtype=complex)
    for sigma in perms:
        out += phi_word(T, symgroup.reduced_word(sigma), n)
    return out


def _symmetrizer_generic(T: YangBaxterOperator, n: int) -> np.ndarray:
    # walk S_n by length, phi(s pi_k) = phi(s) T_k on ascents; two layers in memory
    d = T.d
    layer = {symgroup.identity(n): np.eye(d**n, dtype=complex)}
    total = layer[symgroup.identity(n)].copy()
    while layer:
        nxt: dict = {}
        for sigma, mat in layer.items():
            for k in range(1, n):
                if sigma[k - 1] < sigma[k]:
                    tau = symgroup.compose(sigma, symgroup.transposition(n, k))
                    if tau not in nxt:
                        nxt[tau] = local_right(mat, T.matrix, k, n, d)
        for mat in nxt.values():
            total += mat
        layer = nxt
    return total


def symmetrizer(T: YangBaxterOperator, n: int) -> np.ndarray:
    """``P^{(n)} = sum_{sigma in S_n} phi(sigma)`` by direct enumeration (``n <= 8``)."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if n > MAX_DIRECT:
        raise ValueError(f"direct symmetrizer limited to n <= {MAX_DIRECT}; use symmetrizer_recursive")
    if n <= 1:
        return np.eye(T.d**n, dtype=complex)
    if T.monomial is not None:
        return kernels.monomial_perm_sum(symgroup.as_array(symgroup.all_permutations(n)), T.monomial, T.d, n)
    return _symmetrizer_generic(T, n)


def r_nk(T: YangBaxterOperator, n: int, k: int) -> np.ndarray:
    """``R_{n,k}``: sum of ``phi`` over the ``(n-k, k)``-shuffles.

    The shuffles are the inverses of the minimal right-coset representatives,
    so this is the coset sum of ``phi(sigma^{-1})``.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n == 0:
        return np.eye(1, dtype=complex)
    return _phi_sum(T, symgroup.shuffle_representatives(n, k), n)


def r_nk_star(T: YangBaxterOperator, n: int, k: int) -> np.ndarray:
    """Conjugate transpose of ``R_{n,k}`` in free coordinates."""
    return r_nk(T, n, k).conj().T


def symmetrizer_recursive(T: YangBaxterOperator, n: int) -> np.ndarray:
    """``P^{(n)} = R_{n,1} (P^{(n-1)} (x) I)``, never enumerating ``S_n``."""
    P = np.eye(T.d if n >= 1 else 1, dtype=complex)
    if n <= 1:
        return np.eye(T.d**n, dtype=complex)
    for m in range(2, n + 1):
        P = r_nk(T, m, 1) @ np.kron(P, np.eye(T.d))
    return P


def c_q_constant(q: float, tol: float = 1e-15, max_terms: int = 1_000_000) -> float:
    """``C_q = prod_{n>=1} (1 - q^n)^{-1}`` for ``0 <= q < 1``."""
    if not 0 <= q < 1:
        raise ValueError(f"C_q needs 0 <= q < 1, got {q}")
    out = 1.0
    qn = q
    for _ in range(max_terms):
        factor = 1.0 / (1.0 - qn)
        out *= factor
        if factor - 1.0 < tol:
            break
        qn *= q
    return out


def reversal(space_or_d, n: int) -> np.ndarray:
    """Free-coordinate matrix of ``f_1 (x) ... (x) f_n -> f_n (x) ... (x) f_1``."""
    d = space_or_d.d if hasattr(space_or_d, "d") else int(space_or_d)
    return kernels.permutation_matrix(np.asarray(symgroup.reversal(n), dtype=np.int64), d, n)


def reverse_vector(v, d: int, n: int) -> np.ndarray:
    if n <= 1:
        return np.array(v, dtype=complex)
    return np.asarray(v).reshape((d,) * n).transpose(tuple(range(n - 1, -1, -1))).reshape(-1).astype(complex)


def domination_constants(T: YangBaxterOperator, n: int, k: int) -> tuple[float, float]:
    """Sharp constants in ``P^(n) <= c (P^(n-k) (x) P^(k))`` and ``P^(n-k) (x) P^(k) <= D P^(n)``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    Pn = symmetrizer(T, n)
    Pt = np.kron(symmetrizer(T, n - k), symmetrizer(T, k))
    Gn = GramForm.from_matrix(Pn)
    Gt = GramForm.from_matrix(Pt)
    c_up = float(np.linalg.eigvalsh(Gt.inv_sqrt @ Pn @ Gt.inv_sqrt)[-1])
    d_low = float(np.linalg.eigvalsh(Gn.inv_sqrt @ Pt @ Gn.inv_sqrt)[-1])
    return c_up, d_low


# -- the space ---------------------------------------------------------------


class DeformedFockSpace:
    """``F_T`` truncated at level ``N``.

    ``base_gram`` is the one-particle Gram (identity for the tracial setting);
    ``conjugation`` is the matrix ``C`` of the real structure ``v -> C conj(v)``
    on ``H`` (identity when the standard basis is real).
    """

    def __init__(
        self,
        T: YangBaxterOperator,
        N: int,
        base_gram=None,
        conjugation=None,
        method: str = "auto",
        comm_tol: float = 1e-10,
    ):
        if N < 0:
            raise ValueError("truncation level must be non-negative")
        self.T = T
        self.d = d = T.d
        self.N = N
        base = np.eye(d, dtype=complex) if base_gram is None else np.asarray(base_gram, dtype=complex)
        if base.shape != (d, d):
            raise ValueError(f"base Gram must be {d}x{d}")
        self.base_gram = GramForm.from_matrix(base)
        self.conjugation = np.eye(d, dtype=complex) if conjugation is None else np.asarray(conjugation, dtype=complex)
        self.symmetrizers: list[np.ndarray] = []
        self.grams: list[GramForm] = []
        self.offsets = [0]
        for n in range(N + 1):
            if method == "direct" or (method == "auto" and T.monomial is not None and n <= MAX_DIRECT):
                P = symmetrizer(T, n)
            else:
                P = symmetrizer_recursive(T, n)
            B = kron_power(base, n)
            defect = np.linalg.norm(B @ P - P @ B)
            if defect > comm_tol * max(1.0, np.linalg.norm(P)):
                raise NumericsError(f"base Gram does not commute with P^({n}) (defect {defect:.3e})")
            self.symmetrizers.append(P)
            self.grams.append(GramForm.from_matrix(B @ P))
            self.offsets.append(self.offsets[-1] + d**n)
        self.dim = self.offsets[-1]
        self._memo: dict = {}

    # coordinates
    def level_dim(self, n: int) -> int:
        return self.d**n

    def sl(self, n: int) -> slice:
        return slice(self.offsets[n], self.offsets[n + 1])

    def level_of_index(self, idx: int) -> int:
        for n in range(self.N + 1):
            if idx < self.offsets[n + 1]:
                return n
        raise IndexError(idx)

    def embed(self, v, n: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[self.sl(n)] = v
        return out

    def vacuum(self) -> np.ndarray:
        return self.embed([1.0], 0)

    def gram(self, n: int) -> GramForm:
        return self.grams[n]

    def inner(self, u, v, n: int) -> complex:
        return self.grams[n].inner(u, v)

    def norm(self, v, n: int) -> float:
        return self.grams[n].norm(v)

    def _block_diag(self, attr: str) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for n, G in enumerate(self.grams):
            out[self.sl(n), self.sl(n)] = getattr(G, attr)
        return out

    @cached_property
    def gram_full(self) -> np.ndarray:
        return self._block_diag("matrix")

    @cached_property
    def gram_inv_full(self) -> np.ndarray:
        return self._block_diag("inv")

    @cached_property
    def sqrt_full(self) -> np.ndarray:
        return self._block_diag("sqrt")

    @cached_property
    def inv_sqrt_full(self) -> np.ndarray:
        return self._block_diag("inv_sqrt")

    def conj_map(self, n: int) -> AntilinearMap:
        """The real-structure conjugation on level ``n``."""
        return AntilinearMap(kron_power(self.conjugation, n))

    def reversal(self, n: int) -> np.ndarray:
        return reversal(self.d, n)

    @cached_property
    def reversal_full(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for n in range(self.N + 1):
            out[self.sl(n), self.sl(n)] = self.reversal(n)
        return out

    @cached_property
    def generator(self) -> np.ndarray:
        """``A`` recovered from the base Gram ``B = 2A(1+A)^{-1}``, i.e. ``A = B(2-B)^{-1}``."""
        B = self.base_gram.matrix
        return B @ np.linalg.inv(2.0 * np.eye(self.d) - B)

    def s_map(self, n: int) -> AntilinearMap:
        """``S`` on level ``n``: reverse the factors of a real tensor."""
        return AntilinearMap(self.reversal(n) @ kron_power(self.conjugation, n))

    def j_map(self, n: int) -> AntilinearMap:
        """Modular conjugation on level ``n``: ``(A^{-1/2})^{(x) n} S``."""
        w, V = np.linalg.eigh(0.5 * (self.generator + self.generator.conj().T))
        a_inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
        return AntilinearMap(kron_power(a_inv_sqrt, n) @ self.s_map(n).matrix)

    def _antilinear_full(self, maker) -> AntilinearMap:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for n in range(self.N + 1):
            out[self.sl(n), self.sl(n)] = maker(n).matrix
        return AntilinearMap(out)

    @cached_property
    def s_full(self) -> AntilinearMap:
        return self._antilinear_full(self.s_map)

    @cached_property
    def j_full(self) -> AntilinearMap:
        return self._antilinear_full(self.j_map)

    def r_star(self, n: int, k: int) -> np.ndarray:
        key = ("r_star", n, k)
        if key not in self._memo:
            self._memo[key] = r_nk_star(self.T, n, k)
        return self._memo[key]

    def conjugate_annihilators(self, k: int) -> list:
        """``a(C^{(x) k} e_beta)`` for every level-``k`` basis index ``beta``."""
        key = ("ann", k)
        if key not in self._memo:
            Ck = kron_power(self.conjugation, k)
            self._memo[key] = [annihilation(self, Ck[:, b], k) for b in range(self.d**k)]
        return self._memo[key]

    def check_level(self, v, n: int) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.d**n:
            raise ValueError(f"vector of length {v.shape[0]} is not in level {n} (d={self.d})")
        return v

    def level_from_vector(self, v) -> int:
        size = np.asarray(v).reshape(-1).shape[0]
        n = 0
        while self.d**n < size:
            n += 1
        if self.d**n != size:
            raise ValueError(f"length {size} is not a power of d={self.d}")
        if self.d == 1:
            raise ValueError("level is ambiguous for d=1; pass it explicitly")
        return n


# -- operators -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Compression of an operator on ``F_T`` to levels ``<= N``.

    ``up``/``down`` bound how far the operator raises/lowers the level
    (signed), ``exact`` is the highest exact source level (``-1``: none).
    """

    space: DeformedFockSpace
    mat: np.ndarray
    up: int = 0
    down: int = 0
    exact: int | None = None

    def __post_init__(self):
        if self.mat.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator matrix does not match the space")
        if self.exact is None:
            object.__setattr__(self, "exact", self.space.N)

    def block(self, target: int, source: int) -> np.ndarray:
        return self.mat[self.space.sl(target), self.space.sl(source)]

    @property
    def blocks(self) -> dict[tuple[int, int], np.ndarray]:
        sp = self.space
        out = {}
        for m2 in range(sp.N + 1):
            for m in range(sp.N + 1):
                B = self.block(m2, m)
                if np.any(B):
                    out[(m2, m)] = B
        return out

    def _clamp(self, ex: int) -> int:
        return max(-1, min(self.space.N, ex))

    def _check(self, other: "FockOperator"):
        if other.space is not self.space:
            raise ValueError("operators live on different spaces")

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        return FockOperator(
            self.space, self.mat + other.mat, max(self.up, other.up), max(self.down, other.down),
            min(self.exact, other.exact),
        )

    def __neg__(self) -> "FockOperator":
        return FockOperator(self.space, -self.mat, self.up, self.down, self.exact)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return self + (-other)

    def __mul__(self, c) -> "FockOperator":
        return FockOperator(self.space, c * self.mat, self.up, self.down, self.exact)

    __rmul__ = __mul__

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._check(other)
        ex = min(other.exact, self.exact - max(other.up, 0))
        return FockOperator(
            self.space, self.mat @ other.mat, self.up + other.up, self.down + other.down, self._clamp(ex)
        )

    def apply(self, v) -> np.ndarray:
        return self.mat @ v

    def adjoint(self) -> "FockOperator":
        """Adjoint for the deformed scalar product, ``G^{-1} X^dagger G``."""
        sp = self.space
        X = sp.gram_inv_full @ self.mat.conj().T @ sp.gram_full
        ex = sp.N if self.exact >= sp.N else self.exact - max(self.down, 0)
        return FockOperator(sp, X, self.down, self.up, self._clamp(ex))

    def orthonormal(self) -> np.ndarray:
        """Matrix in T-orthonormal coordinates, ``G^{1/2} X G^{-1/2}``."""
        return self.space.sqrt_full @ self.mat @ self.space.inv_sqrt_full

    def exact_columns(self) -> slice:
        return slice(0, self.space.offsets[self.exact + 1])

    def norm(self) -> float:
        """Weighted operator norm over the exact columns (a lower bound)."""
        if self.exact < 0:
            raise TruncationError("no exact source level; enlarge N")
        return spectral_norm(self.orthonormal()[:, self.exact_columns()])

    def vacuum_state(self) -> complex:
        return complex(self.mat[0, 0])

    def is_zero(self, tol: float = 1e-12) -> float:
        return float(np.max(np.abs(self.mat[:, self.exact_columns()]), initial=0.0)) <= tol


def identity(space: DeformedFockSpace) -> FockOperator:
    return FockOperator(space, np.eye(space.dim, dtype=complex))


def level_projection(space: DeformedFockSpace, levels) -> FockOperator:
    D = np.zeros(space.dim, dtype=complex)
    for n in levels:
        if 0 <= n <= space.N:
            D[space.sl(n)] = 1.0
    return FockOperator(space, np.diag(D))


def _level(space: DeformedFockSpace, xi, n: int | None) -> tuple[np.ndarray, int]:
    if n is None:
        n = space.level_from_vector(xi)
    return space.check_level(xi, n), n


def creation(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    """Left creation ``a*(xi)``: tensoring by ``xi`` on the left."""
    xi, n = _level(space, xi, n)
    d = space.d
    X = np.zeros((space.dim, space.dim), dtype=complex)
    for m in range(space.N - n + 1):
        X[space.sl(m + n), space.sl(m)] = np.kron(xi[:, None], np.eye(d**m))
    return FockOperator(space, X, up=n, down=-n)


def right_creation(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    """Right creation: tensoring by ``xi`` on the right."""
    xi, n = _level(space, xi, n)
    d = space.d
    X = np.zeros((space.dim, space.dim), dtype=complex)
    for m in range(space.N - n + 1):
        X[space.sl(m + n), space.sl(m)] = np.kron(np.eye(d**m), xi[:, None])
    return FockOperator(space, X, up=n, down=-n)


def annihilation(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    """``a(xi) = (a*(U xi))^*``, antilinear in ``xi``."""
    xi, n = _level(space, xi, n)
    return creation(space, reverse_vector(xi, space.d, n), n).adjoint()


def right_annihilation(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    xi, n = _level(space, xi, n)
    return right_creation(space, reverse_vector(xi, space.d, n), n).adjoint()


def gaussian(space: DeformedFockSpace, f) -> FockOperator:
    """``G(f) = a*(f) + a(f)``."""
    return creation(space, f, 1) + annihilation(space, f, 1)


def right_gaussian(space: DeformedFockSpace, f) -> FockOperator:
    return right_creation(space, f, 1) + right_annihilation(space, f, 1)


def fock_reversal(space: DeformedFockSpace) -> FockOperator:
    return FockOperator(space, space.reversal_full.copy())


def vacuum_state(space: DeformedFockSpace, X: FockOperator) -> complex:
    """``<Omega, X Omega>``; the vacuum has unit norm at every deformation."""
    if X.space is not space:
        raise ValueError("operator lives on a different space")
    return X.vacuum_state()


def binomial_count(n: int, k: int) -> int:
    return comb(n, k)
