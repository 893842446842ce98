"""Wick products ``W(xi)`` and the creation-annihilation bimonomials ``U_k``.

``W(xi) = sum_k U_k(R*_{n,k} xi)`` where ``U_k(u (x) v) = a*(u) a(J v)`` and
``J`` is the real-structure conjugation on the length-``k`` factor.
"""

from __future__ import annotations

import numpy as np

from .fock import (
    DeformedFockSpace,
    FockOperator,
    TruncationError,
    c_q_constant,
    creation,
    reverse_vector,
)
from .numerics import AntilinearMap, kron_power, spectral_norm
from .report import CheckReport

__all__ = [
    "AntilinearMap",
    "u_k_operator",
    "u_k_closed_form",
    "wick",
    "right_wick",
    "conjugate_by",
    "adjoint_identity_check",
    "bozejko_check",
    "compression_identity_check",
    "wick_norm",
]


def _split(space: DeformedFockSpace, x, n: int, k: int) -> np.ndarray:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n > space.N:
        raise TruncationError(f"level {n} exceeds truncation N={space.N}")
    x = space.check_level(x, n)
    return x.reshape(space.d ** (n - k), space.d**k)


def u_k_operator(space: DeformedFockSpace, x, n: int, k: int) -> FockOperator:
    """``U_k(x)`` for ``x`` in ``H^{(x) n-k} (x) H^{(x) k}``, built from ladder operators."""
    X = _split(space, x, n, k)
    anns = space.conjugate_annihilators(k)
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for b, ann in enumerate(anns):
        col = X[:, b]
        if not np.any(col):
            continue
        mat += creation(space, col, n - k).mat @ ann.mat
    return FockOperator(space, mat, up=n - 2 * k, down=2 * k - n)


def u_k_closed_form(space: DeformedFockSpace, x, n: int, k: int) -> FockOperator:
    """Blockwise formula ``kron(X (U C)^dagger, G_{m-k}^{-1}) G_m``; test oracle for :func:`u_k_operator`."""
    X = _split(space, x, n, k)
    UC = space.reversal(k) @ kron_power(space.conjugation, k)
    Xm = X @ UC.conj().T
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for m in range(k, space.N + 1):
        tgt = m - 2 * k + n
        if tgt > space.N:
            break
        mat[space.sl(tgt), space.sl(m)] = np.kron(Xm, space.gram(m - k).inv) @ space.gram(m).matrix
    return FockOperator(space, mat, up=n - 2 * k, down=2 * k - n)


def wick(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    """``W(xi) = sum_{k=0}^n U_k(R*_{n,k} xi)``."""
    if n is None:
        n = space.level_from_vector(xi)
    if n > space.N:
        raise TruncationError(f"level {n} exceeds truncation N={space.N}")
    xi = space.check_level(xi, n)
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(n + 1):
        mat += u_k_operator(space, space.r_star(n, k) @ xi, n, k).mat
    return FockOperator(space, mat, up=n, down=n)


def conjugate_by(J: AntilinearMap, X: FockOperator) -> FockOperator:
    """``J X J`` for a level-preserving antilinear involution ``J``."""
    return FockOperator(X.space, J.sandwich(X.mat), X.up, X.down, X.exact)


def right_wick(space: DeformedFockSpace, xi, n: int | None = None) -> FockOperator:
    """``W_r(xi) = J W(J xi) J`` with ``J`` the modular conjugation.

    In the tracial setting ``J = S`` and this is the reversal conjugate of
    the left Wick product.
    """
    if n is None:
        n = space.level_from_vector(xi)
    xi = space.check_level(xi, n)
    Jn = space.j_map(n)
    return conjugate_by(space.j_full, wick(space, Jn(xi), n))


def wick_norm(W: FockOperator) -> float:
    return W.norm()


def _rel_op_defect(A: FockOperator, B: FockOperator) -> float:
    """Relative defect in orthonormal coordinates over the common exact columns."""
    ex = min(A.exact, B.exact)
    if ex < 0:
        raise TruncationError("no exact source level")
    cols = slice(0, A.space.offsets[ex + 1])
    dA = (A.orthonormal() - B.orthonormal())[:, cols]
    scale = max(spectral_norm(B.orthonormal()[:, cols]), 1e-300)
    return spectral_norm(dA) / scale


def adjoint_identity_check(space: DeformedFockSpace, xi, n: int | None = None) -> float:
    """Residual of ``W(xi)^* = W(S xi)`` on exact columns."""
    if n is None:
        n = space.level_from_vector(xi)
    xi = space.check_level(xi, n)
    lhs = wick(space, xi, n).adjoint()
    rhs = wick(space, space.s_map(n)(xi), n)
    return _rel_op_defect(lhs, rhs)


def bozejko_check(space: DeformedFockSpace, xi, n: int, tol_low: float = 1e-10, tol_high: float = 1e-8):
    """Both sides of ``||xi|| <= ||W(xi)|| <= C^{3/2} (n+1) ||xi||``.

    Returns ``(lower, upper)`` reports on the ratio ``||W(xi)|| / ||xi||_T``; the
    middle norm is a truncated lower bound.
    """
    xi = space.check_level(xi, n)
    nrm = space.norm(xi, n)
    if nrm == 0:
        raise ValueError("xi must be non-zero")
    ratio = wick(space, xi, n).norm() / nrm
    C = c_q_constant(space.T.q_bound)
    hi = C**1.5 * (n + 1)
    params = {"d": space.d, "n": n, "N": space.N, "q_bound": space.T.q_bound, "C_q": C, "anchor": "bozejko_inequality"}
    lower = CheckReport("bozejko_lower", lhs=1.0, rhs=ratio, tolerance=tol_low, params=params, truncation_flag=True,
                        notes="ratio ||W(xi)||/||xi||_T against 1; middle norm is a truncated lower bound")
    upper = CheckReport("bozejko_upper", lhs=ratio, rhs=hi, tolerance=tol_high, params=params, truncation_flag=True,
                        notes="ratio against C^{3/2}(n+1) with C evaluated at ||T||")
    return lower, upper


def compression_identity_check(space: DeformedFockSpace, x, n: int, k: int) -> float:
    """Residual of ``P_{n-k} U_k(x)|_{H^{(x) k}} = x(U J)`` in orthonormal coordinates.

    The operator side comes from :func:`u_k_operator`; the reference side is
    ``X (U C)^dagger G_k`` written down from the pairing
    ``<e_l, U J e_j>_T``.
    """
    X = _split(space, x, n, k)
    a = n - k
    blk = u_k_operator(space, x, n, k).block(a, k)
    UC = space.reversal(k) @ kron_power(space.conjugation, k)
    ref = X @ UC.conj().T @ space.gram(k).matrix
    Ga, Gk = space.gram(a), space.gram(k)
    lhs = Ga.sqrt @ blk @ Gk.inv_sqrt
    rhs = Ga.sqrt @ ref @ Gk.inv_sqrt
    return spectral_norm(lhs - rhs) / max(spectral_norm(rhs), 1e-300)


def wick_recursive(space: DeformedFockSpace, xi, n: int) -> FockOperator:
    """Independent oracle: ``W(h (x) eta) = G(h) W(eta) - W(a(h) eta)`` for real ``h``.

    Expands ``xi`` in the real basis ``{C-fixed vectors}`` of the first factor
    and recurses; only usable when the conjugation fixes a basis, so it
    requires ``C = I``.
    """
    from .fock import annihilation, gaussian, identity

    if not np.allclose(space.conjugation, np.eye(space.d)):
        raise ValueError("recursive oracle needs the standard basis to be real")
    xi = space.check_level(xi, n)
    if n == 0:
        return identity(space) * complex(xi[0])
    if n == 1:
        return creation(space, xi, 1) + annihilation(space, np.conj(xi), 1)
    d = space.d
    X = xi.reshape(d, d ** (n - 1))
    out = None
    for i in range(d):
        eta = X[i]
        if not np.any(eta):
            continue
        h = np.zeros(d, dtype=complex)
        h[i] = 1.0
        term = gaussian(space, h) @ wick_recursive(space, eta, n - 1)
        # a(h) eta lives on level n-2; apply the level-(n-1) -> (n-2) block
        lowered = annihilation(space, h, 1).block(n - 2, n - 1) @ eta
        term = term - wick_recursive(space, lowered, n - 2)
        out = term if out is None else out + term
    if out is None:
        return identity(space) * 0.0
    return out


def reversal_vector(space: DeformedFockSpace, xi, n: int) -> np.ndarray:
    return reverse_vector(xi, space.d, n)
