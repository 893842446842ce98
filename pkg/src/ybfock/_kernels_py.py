"""Pure numpy implementation of the hot kernels.

Same signatures as the compiled ``_kernels`` module; selected automatically
when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np


def multi_index_digits(d: int, n: int) -> np.ndarray:
    """``(d**n, n)`` array of base-``d`` digits, most significant first."""
    D = d**n
    idx = np.arange(D, dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % d


def monomial_perm_sum(perms, weights, d: int, n: int, coeffs=None) -> np.ndarray:
    """``sum_s c_s phi(s)`` for a deformation ``T(e_i (x) e_j) = Q_ij e_j (x) e_i``.

    ``phi(s) e_I = w(s, I) e_J`` with ``J[s(a)] = I[a]`` and ``w`` the product
    of ``Q[I[a], I[b]]`` over the inversion pairs ``a < b, s(a) > s(b)``.
    """
    perms = np.asarray(perms, dtype=np.int64).reshape(-1, n)
    Q = np.asarray(weights, dtype=complex)
    D = d**n
    out = np.zeros((D, D), dtype=complex)
    if n == 0:
        out[0, 0] = len(perms) if coeffs is None else complex(np.sum(coeffs))
        return out
    digits = multi_index_digits(d, n)
    cols = np.arange(D)
    for row, sigma in enumerate(perms):
        w = np.ones(D, dtype=complex) if coeffs is None else np.full(D, coeffs[row], dtype=complex)
        for a in range(n):
            for b in range(a + 1, n):
                if sigma[a] > sigma[b]:
                    w = w * Q[digits[:, a], digits[:, b]]
        target = digits @ (d ** (n - 1 - sigma))
        out[target, cols] += w
    return out


def permutation_matrix(sigma, d: int, n: int) -> np.ndarray:
    """Matrix of ``U_sigma``, moving the tensor factor in slot ``a`` to ``sigma(a)``."""
    sigma = np.asarray(sigma, dtype=np.int64)
    D = d**n
    out = np.zeros((D, D), dtype=complex)
    if n == 0:
        out[0, 0] = 1.0
        return out
    digits = multi_index_digits(d, n)
    target = digits @ (d ** (n - 1 - sigma))
    out[target, np.arange(D)] = 1.0
    return out
