"""Quasi-free (q-Araki-Woods) setting.

Coordinates are the eigenbasis of the generator ``A``: first ``fixed_dim``
vectors with ``A = 1``, then one adjacent pair ``(lambda, 1/lambda)`` per entry
of ``lambdas``.  The real structure is ``v -> C conj(v)`` with ``C`` swapping
each pair, so ``(1, 1)`` and ``(i, -i)`` span a real rotation block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .deformation import make_q_flip
from .fock import DeformedFockSpace, c_q_constant, gaussian, vacuum_state
from .numerics import AntilinearMap, GramForm, kron_power
from .opspace import khintchine_deformed_check
from .report import CheckReport
from .wick import right_wick, wick


@dataclass(frozen=True)
class QuasiFreeGenerator:
    lambdas: tuple[float, ...] = ()
    fixed_dim: int = 0

    def __post_init__(self):
        lams = tuple(float(x) for x in self.lambdas)
        if any(not lam > 1 for lam in lams):
            raise ValueError("every lambda must exceed 1")
        if self.fixed_dim < 0:
            raise ValueError("fixed_dim must be non-negative")
        if self.fixed_dim + 2 * len(lams) < 1:
            raise ValueError("empty one-particle space")
        object.__setattr__(self, "lambdas", lams)

    @property
    def d(self) -> int:
        return self.fixed_dim + 2 * len(self.lambdas)

    @cached_property
    def spectrum(self) -> np.ndarray:
        vals = [1.0] * self.fixed_dim
        for lam in self.lambdas:
            vals += [lam, 1.0 / lam]
        return np.array(vals)

    @property
    def A(self) -> np.ndarray:
        return np.diag(self.spectrum).astype(complex)

    @cached_property
    def conjugation_matrix(self) -> np.ndarray:
        C = np.zeros((self.d, self.d), dtype=complex)
        for i in range(self.fixed_dim):
            C[i, i] = 1.0
        for a in range(len(self.lambdas)):
            i = self.fixed_dim + 2 * a
            C[i, i + 1] = C[i + 1, i] = 1.0
        return C

    @property
    def conjugation(self) -> AntilinearMap:
        return AntilinearMap(self.conjugation_matrix)

    @property
    def norm_A(self) -> float:
        return float(self.spectrum.max())

    def real_basis(self) -> np.ndarray:
        """Columns spanning ``H_R`` over the reals."""
        cols = []
        for i in range(self.fixed_dim):
            v = np.zeros(self.d, dtype=complex)
            v[i] = 1.0
            cols.append(v)
        for a in range(len(self.lambdas)):
            i = self.fixed_dim + 2 * a
            u = np.zeros(self.d, dtype=complex)
            w = np.zeros(self.d, dtype=complex)
            u[i], u[i + 1] = 1.0, 1.0
            w[i], w[i + 1] = 1j, -1j
            cols += [u, w]
        return np.array(cols).T


def u_gram(gen: QuasiFreeGenerator) -> GramForm:
    """``<xi, eta>_U = <2A(1+A)^{-1} xi, eta>``, diagonal in the eigenbasis."""
    lam = gen.spectrum
    return GramForm.from_matrix(np.diag(2 * lam / (1 + lam)).astype(complex))


def quasi_free_fock(gen: QuasiFreeGenerator, q: float, N: int) -> DeformedFockSpace:
    return DeformedFockSpace(make_q_flip(gen.d, q), N, base_gram=u_gram(gen).matrix,
                             conjugation=gen.conjugation_matrix)


def modular_operators(gen: QuasiFreeGenerator, n: int):
    """``(Delta_n, J_n, S_n)`` on ``H^{(x) n}``."""
    lam = gen.spectrum
    Delta = kron_power(np.diag(1.0 / lam), n)
    from .fock import reversal

    UCn = reversal(gen.d, n) @ kron_power(gen.conjugation_matrix, n)
    J = AntilinearMap(kron_power(np.diag(lam**-0.5), n) @ UCn)
    S = AntilinearMap(UCn)
    return Delta, J, S


def polar_residual(gen: QuasiFreeGenerator, n: int) -> float:
    """``|| S_n - J_n Delta_n^{1/2} ||`` as antilinear maps."""
    Delta, J, S = modular_operators(gen, n)
    half = np.diag(np.sqrt(np.diag(Delta).real)).astype(complex)
    return float(np.max(np.abs(S.matrix - J.after_linear(half).matrix)))


def hiai_constant(q_bound: float, norm_A: float, n: int) -> float:
    C = c_q_constant(q_bound)
    if abs(norm_A - 1.0) < 1e-12:
        geom = float(n + 1)
    else:
        geom = (norm_A ** ((n + 1) / 2) - 1) / (norm_A**0.5 - 1)
    return C**1.5 * geom


def hiai_scalar_check(space: DeformedFockSpace, alphas, vectors, n: int, norm_A: float | None = None,
                      tol: float = 1e-9):
    """Both sides of the quasi-free scalar inequality for ``xi = sum alpha_u eta_u``."""
    xi = np.tensordot(np.asarray(alphas, dtype=complex), np.asarray(vectors, dtype=complex), axes=1)
    nrm = space.norm(xi, n)
    middle = wick(space, xi, n).norm()
    if norm_A is None:
        norm_A = float(np.max(np.linalg.eigvalsh(0.5 * (space.generator + space.generator.conj().T))))
    K = hiai_constant(space.T.q_bound, norm_A, n)
    params = {"d": space.d, "n": n, "N": space.N, "q_bound": space.T.q_bound, "norm_A": norm_A, "constant": K,
              "anchor": "quasi_free_scalar_inequality"}
    lower = CheckReport("hiai_lower", lhs=nrm, rhs=middle, tolerance=tol, params=params, truncation_flag=True,
                        notes="||xi||_q against the truncated ||W(xi)||")
    upper = CheckReport("hiai_upper", lhs=middle, rhs=K * nrm, tolerance=tol, params=params, truncation_flag=True,
                        notes="geometric factor (||A||^{(n+1)/2}-1)/(||A||^{1/2}-1), limit n+1 at ||A||=1")
    return lower, upper


def eigenbasis(space: DeformedFockSpace, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Deformed-orthonormal eigenvectors ``G_n^{-1/2} e_i`` of ``A^{(x) n}`` and their eigenvalues."""
    A = np.diag(space.generator).real
    lam = np.ones(1)
    for _ in range(n):
        lam = np.kron(lam, A)
    return space.gram(n).inv_sqrt.copy(), lam


def quasi_free_khintchine_check(space: DeformedFockSpace, alphas, n: int, vectors=None, tol: float = 1e-9):
    """Quasi-free vector-valued Khintchine check with ``I (x) S`` on the length-``k`` slot.

    ``S`` enters in conjugate coordinates as the linear map ``U C^{(x) k}``.
    Returns ``(lower, upper, data)``; ``data['norm_A_factors']`` lists
    ``||A||^{k/2}`` per ``k`` (reported, not used in the bound).
    """
    if vectors is None:
        vectors = eigenbasis(space, n)[0].T
    from .fock import reversal

    def slot(k):
        return reversal(space.d, k) @ kron_power(space.conjugation, k)

    lo, up, data = khintchine_deformed_check(space, alphas, vectors, n, tol=tol, slot_map=slot, name="quasi_free_khintchine")
    normA = float(np.max(np.diag(space.generator).real))
    data["norm_A_factors"] = [normA ** (k / 2) for k in range(n + 1)]
    return lo, up, data


def aw_trace_value(gen: QuasiFreeGenerator, n: int) -> float:
    """``Trace((A^{-1/2})^{(x) n}) = (sum_spec lambda^{-1/2})^n``."""
    return float(np.sum(gen.spectrum**-0.5) ** n)


def aw_trace_check(gen: QuasiFreeGenerator, n: int, q: float = 0.0, N: int | None = None,
                   tol: float = 1e-12):
    """``sum_i <Delta^{1/2} xi_i, xi_i>_q`` over a deformed-orthonormal eigenbasis.

    Returns ``(scalar, vacuum)`` reports: the first compares the Gram
    evaluation with the closed trace, the second the vacuum-state route
    ``sum_i phi(W_r(J xi_i) W(xi_i))``.
    """
    N = n if N is None else N
    sp = quasi_free_fock(gen, q, N)
    Xi, lam = eigenbasis(sp, n)
    Delta, J, _ = modular_operators(gen, n)
    half = np.sqrt(np.diag(Delta).real)
    G = sp.gram(n)
    val = sum((np.vdot(half * Xi[:, i], G.matrix @ Xi[:, i])).real for i in range(Xi.shape[1]))
    ref = aw_trace_value(gen, n)
    vac = 0.0
    for i in range(Xi.shape[1]):
        xi = Xi[:, i]
        X = right_wick(sp, J(xi), n) @ wick(sp, xi, n)
        vac += vacuum_state(sp, X).real
    params = {"lambdas": list(gen.lambdas), "fixed_dim": gen.fixed_dim, "n": n, "q": q, "N": N,
              "anchor": "quasi_free_trace_formula"}
    pair = float(np.prod([lam_**0.5 + lam_**-0.5 for lam_ in gen.lambdas])) if gen.lambdas else 1.0
    note = f"closed form (sum_spec lambda^-1/2)^n; per-pair product prod(lambda^1/2+lambda^-1/2) = {pair:.15g}"
    r1 = CheckReport("aw_trace", lhs=abs(val - ref), rhs=0.0, tolerance=tol * max(1.0, ref), params=params,
                     notes=note)
    r2 = CheckReport("aw_trace_vacuum", lhs=abs(vac - ref), rhs=0.0, tolerance=1e-9 * max(1.0, ref),
                     params=params, notes="vacuum state of W_r(J xi) W(xi) summed over the eigenbasis")
    return r1, r2, {"value": val, "vacuum": vac, "reference": ref}


def spectral_criterion(fixed_dim: int, lambdas, t_cut: float) -> dict:
    """Spectral non-injectivity criterion.

    Counts eigenvalues in the half-open interval ``(1, t_cut]``; eigenvalue 1
    is covered by the ``fixed_dim >= 2`` clause.
    """
    if not t_cut > 1:
        raise ValueError("t_cut must exceed 1")
    count = sum(1 for lam in lambdas if 1 < lam <= t_cut)
    ratio = count / t_cut**2
    if fixed_dim >= 2:
        verdict, reason = "non-injective", "fixed part has dimension >= 2"
    elif ratio > 0.5:
        verdict, reason = "non-injective", f"count/T^2 = {ratio:.6g} > 1/2"
    else:
        verdict, reason = "inconclusive", f"count/T^2 = {ratio:.6g} <= 1/2"
    return {
        "verdict": verdict,
        "reason": reason,
        "count": count,
        "ratio": ratio,
        "interval": "(1, T]",
        "notes": "eigenvalues counted in (1, T]; the closed-interval reading would also count eigenvalue 1",
    }


def non_traciality_witness(gen: QuasiFreeGenerator, q: float = 0.0, N: int = 3, threshold: float = 0.01):
    """Search pairs of gaussians and Wick products of real vectors for ``|phi(XY) - phi(YX)| > threshold``."""
    sp = quasi_free_fock(gen, q, N)
    R = gen.real_basis()
    cands = []
    for i in range(R.shape[1]):
        cands.append((f"G(h{i})", gaussian(sp, R[:, i])))
    for i, j in itertools.product(range(R.shape[1]), repeat=2):
        if N >= 2:
            cands.append((f"W(h{i}h{j})", wick(sp, np.kron(R[:, i], R[:, j]), 2)))
    best = (0.0, None, None)
    for (na, X), (nb, Y) in itertools.combinations(cands, 2):
        gap = abs(vacuum_state(sp, X @ Y) - vacuum_state(sp, Y @ X))
        if gap > best[0]:
            best = (gap, na, nb)
        if gap > threshold:
            return {"found": True, "gap": gap, "pair": (na, nb)}
    return {"found": False, "gap": best[0], "pair": (best[1], best[2])}
