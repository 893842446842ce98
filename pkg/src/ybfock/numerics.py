"""Dense complex linear-algebra primitives.

Everything downstream (symmetrizers, Fock-space Grams, weighted norms) goes
through this module so that the positivity and Hermiticity tolerances live in
one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-10
PSD_EPS = 1e-12
POWER_ITERATION_THRESHOLD = 20_000


class NumericsError(ValueError):
    """Shape or structure violation in a linear-algebra primitive."""


class PositivityLossError(NumericsError):
    """A matrix that must be strictly positive has an eigenvalue below eps."""


def _as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericsError("matrix has non-finite entries")
    return M


def hermitian_defect(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def herm_eigen(M, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues sorted in descending order and the matching unitary
    matrix of eigenvectors (columns).
    """
    M = _as_square(M)
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if hermitian_defect(M) > tol * scale:
        raise NumericsError(f"matrix is not Hermitian (defect {hermitian_defect(M):.3e})")
    H = 0.5 * (M + M.conj().T)
    w, V = np.linalg.eigh(H)
    return w[::-1].copy(), V[:, ::-1].copy()


def psd_power(M, p: float, eps: float = PSD_EPS, tol: float = HERM_TOL) -> np.ndarray:
    """``M**p`` for a strictly positive Hermitian ``M`` via its spectrum.

    ``eps`` is relative to the largest eigenvalue; a smaller eigenvalue raises
    :class:`PositivityLossError` instead of being clamped.
    """
    w, V = herm_eigen(M, tol=tol)
    if w.size == 0:
        return np.zeros((0, 0), dtype=complex)
    top = w[0]
    if top <= 0 or w[-1] <= eps * top:
        raise PositivityLossError(
            f"smallest eigenvalue {w[-1]:.3e} is below {eps:.1e} x largest ({top:.3e})"
        )
    return (V * w**p) @ V.conj().T


def kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def kron_power(M, n: int) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return kron_all([M] * n)


def spectral_norm(X) -> float:
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    if min(X.shape) <= POWER_ITERATION_THRESHOLD:
        return float(np.linalg.norm(X, 2))
    return _power_norm(X)


def _power_norm(X: np.ndarray, rtol: float = 1e-8, maxiter: int = 10_000) -> float:
    v = np.ones(X.shape[1], dtype=complex) / np.sqrt(X.shape[1])
    prev = 0.0
    for _ in range(maxiter):
        w = X.conj().T @ (X @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return 0.0
        v = w / nrm
        if abs(nrm - prev) <= rtol * nrm:
            break
        prev = nrm
    return float(np.sqrt(nrm))


@dataclass(frozen=True)
class GramForm:
    """A positive definite Hermitian form together with its square roots."""

    matrix: np.ndarray
    sqrt: np.ndarray
    inv_sqrt: np.ndarray
    inv: np.ndarray

    @classmethod
    def from_matrix(cls, M, eps: float = PSD_EPS, tol: float = HERM_TOL) -> "GramForm":
        M = _as_square(M)
        w, V = herm_eigen(M, tol=tol)
        if w.size and (w[0] <= 0 or w[-1] <= eps * w[0]):
            raise PositivityLossError(
                f"Gram form lost strict positivity: eigenvalues in [{w[-1]:.3e}, {w[0]:.3e}]"
            )
        Vh = V.conj().T
        H = 0.5 * (M + M.conj().T)
        return cls(
            matrix=H,
            sqrt=(V * np.sqrt(w)) @ Vh,
            inv_sqrt=(V / np.sqrt(w)) @ Vh,
            inv=(V / w) @ Vh,
        )

    @classmethod
    def identity(cls, dim: int) -> "GramForm":
        eye = np.eye(dim, dtype=complex)
        return cls(eye, eye, eye, eye)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def inner(self, u, v) -> complex:
        """``<u, v>`` in this form, antilinear in ``u``."""
        return complex(np.vdot(u, self.matrix @ v))

    def norm(self, u) -> float:
        return float(np.sqrt(max(self.inner(u, u).real, 0.0)))

    def kron(self, other: "GramForm") -> "GramForm":
        return GramForm(
            np.kron(self.matrix, other.matrix),
            np.kron(self.sqrt, other.sqrt),
            np.kron(self.inv_sqrt, other.inv_sqrt),
            np.kron(self.inv, other.inv),
        )


def weighted_operator_norm(X, G_out: GramForm, G_in: GramForm) -> float:
    """Operator norm of ``X`` from ``(C^n, G_in)`` to ``(C^m, G_out)``."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape != (G_out.dim, G_in.dim):
        raise NumericsError(
            f"operator of shape {X.shape} incompatible with Grams {G_out.dim}x{G_in.dim}"
        )
    return spectral_norm(G_out.sqrt @ X @ G_in.inv_sqrt)


def gram_adjoint(X, G_out: GramForm, G_in: GramForm) -> np.ndarray:
    """Adjoint of ``X: (G_in) -> (G_out)``, i.e. ``G_in^{-1} X^dagger G_out``."""
    return G_in.inv @ np.asarray(X).conj().T @ G_out.matrix


def rel_frobenius(A, B) -> float:
    A = np.asarray(A)
    B = np.asarray(B)
    scale = max(np.linalg.norm(B), 1e-300)
    return float(np.linalg.norm(A - B) / scale)


@dataclass(frozen=True)
class AntilinearMap:
    """``v -> matrix @ conj(v)``."""

    matrix: np.ndarray

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.conj(v)

    def compose(self, other: "AntilinearMap") -> np.ndarray:
        """The linear map ``self o other``, i.e. ``M1 @ conj(M2)``."""
        return self.matrix @ np.conj(other.matrix)

    def after_linear(self, L) -> "AntilinearMap":
        """``self o L`` for a linear ``L``."""
        return AntilinearMap(self.matrix @ np.conj(L))

    def before_linear(self, L) -> "AntilinearMap":
        """``L o self``."""
        return AntilinearMap(np.asarray(L) @ self.matrix)

    def sandwich(self, X, right: "AntilinearMap | None" = None) -> np.ndarray:
        """Matrix of the linear map ``self o X o right`` (``right`` defaults to ``self``)."""
        right = self if right is None else right
        return self.matrix @ np.conj(X) @ np.conj(right.matrix)
