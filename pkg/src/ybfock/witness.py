"""Non-injectivity witness chain for tracial deformations.

The assumed-for-contradiction step ``tau(sum W*W) <= ||sum conj(W) (x) W||`` is
never asserted.  Everything else in the chain is evaluated: the trace side,
the (truncated) min norm, the Hilbert-Schmidt links and the scalar crossing
index where ``d^{n/2}`` overtakes the chain constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .fock import DeformedFockSpace, c_q_constant
from .numerics import spectral_norm
from .report import CheckReport
from .wick import wick

MATRIX_BUDGET = 40_000_000
DENSE_LIMIT = 1024
HERMITIAN_TOL = 1e-12
DISCLAIMER = "the semidiscreteness inequality is the contradiction hypothesis and is not asserted"


class BudgetExceededError(ValueError):
    pass


@dataclass
class WitnessReport:
    params: dict
    trace_value: float
    computed_min_norm: float
    chain_upper_bound: float
    links: list = field(default_factory=list)
    crossing_index: int | None = None
    notes: str = DISCLAIMER

    def as_dict(self) -> dict:
        return {
            "params": dict(self.params),
            "trace_value": self.trace_value,
            "computed_min_norm": self.computed_min_norm,
            "chain_upper_bound": self.chain_upper_bound,
            "links": [r.as_dict() for r in self.links],
            "crossing_index": self.crossing_index,
            "notes": self.notes,
        }


def t_orthonormal_basis(space: DeformedFockSpace, n: int) -> np.ndarray:
    """Columns ``xi_i = G_n^{-1/2} e_i``."""
    return space.gram(n).inv_sqrt.copy()


def trace_side(space: DeformedFockSpace, n: int) -> float:
    """``sum_i tau(W(xi_i)^* W(xi_i)) = sum_i ||xi_i||_T^2``."""
    Xi = t_orthonormal_basis(space, n)
    G = space.gram(n).matrix
    return float(np.real(np.einsum("ai,ab,bi->", Xi.conj(), G, Xi)))


def _wick_family(space: DeformedFockSpace, n: int) -> list[np.ndarray]:
    Xi = t_orthonormal_basis(space, n)
    return [wick(space, Xi[:, i], n).orthonormal() for i in range(Xi.shape[1])]


def witness_min_norm(space: DeformedFockSpace, n: int, budget: int = MATRIX_BUDGET) -> float:
    """``|| sum_i conj(W~_i) (x) W~_i ||`` in orthonormal coordinates (a truncated lower bound).

    Applied matrix-free as ``V -> sum_i conj(W~_i) V W~_i^T``.
    """
    D = space.dim
    if D**2 > budget:
        raise BudgetExceededError(f"doubled space has {D**2} entries > budget {budget}")
    Ws = _wick_family(space, n)
    if D**2 <= DENSE_LIMIT:
        M = sum(np.kron(W.conj(), W) for W in Ws)
        return spectral_norm(M)
    WT = [W.T for W in Ws]
    Wc = [W.conj() for W in Ws]

    def fwd(v):
        V = v.reshape(D, D)
        return sum(c @ V @ t for c, t in zip(Wc, WT)).reshape(-1)

    def adj(v):
        Y = v.reshape(D, D)
        return sum(t @ Y @ c for c, t in zip(Wc, WT)).reshape(-1)

    probe = np.cos(np.arange(D * D, dtype=float)).astype(complex)
    hermitian = np.linalg.norm(fwd(probe) - adj(probe)) <= HERMITIAN_TOL * max(np.linalg.norm(fwd(probe)), 1.0)
    v0 = np.ones(D * D, dtype=complex) / D
    if hermitian:
        # the family {xi_i} is closed under reversal, so the sum is self-adjoint
        op = LinearOperator((D * D, D * D), matvec=fwd, dtype=complex)
        w = eigsh(op, k=1, which="LM", v0=v0, tol=1e-13, return_eigenvectors=False)
        return float(abs(w[0]))
    op = LinearOperator((D * D, D * D), matvec=lambda v: adj(fwd(v)), dtype=complex)
    w = eigsh(op, k=1, which="LA", v0=v0, tol=1e-13, return_eigenvectors=False)
    return float(np.sqrt(max(w[0].real, 0.0)))


def hs_link(space: DeformedFockSpace, n: int, k: int, kp: int) -> tuple[float, float]:
    """Hilbert-Schmidt value and min norm of ``sum_i conj(R*_{n,k'} xi_i) (x) R*_{n,k} xi_i``.

    Both are taken in tensor-Gram orthonormal coordinates; the min norm uses
    the column/row split ``(n-k', k'; n-k, k)``.
    """
    d = space.d
    Xi = t_orthonormal_basis(space, n)

    def ortho(kk):
        a, b = n - kk, kk
        root = np.kron(space.gram(a).sqrt, space.gram(b).sqrt)
        return root @ space.r_star(n, kk) @ Xi

    Mk, Mkp = ortho(k), ortho(kp)
    hs = float(np.linalg.norm(Mkp.conj() @ Mk.T))
    mats = []
    for i in range(Xi.shape[1]):
        U = Mkp[:, i].reshape(d ** (n - kp), d**kp).conj()
        V = Mk[:, i].reshape(d ** (n - k), d**k)
        mats.append(np.kron(U, V))
    mn = spectral_norm(sum(mats))
    return hs, mn


def chain_upper_bound(space: DeformedFockSpace, n: int, tol: float = 1e-8) -> tuple[float, list]:
    """``C^3 (n+1)^2 d^{n/2}`` together with per-link reports."""
    C = c_q_constant(space.T.q_bound)
    d = space.d
    base = {"d": d, "n": n, "N": space.N, "q_bound": space.T.q_bound, "C_q": C, "anchor": "witness_chain"}
    links = []
    links.append(CheckReport("reduction_constant", lhs=C**2 * (n + 1) ** 2, rhs=C**2 * (n + 1) ** 2, tolerance=tol,
                             params=base, notes="double application of the vector-valued Khintchine upper bound"))
    target = C * d ** (n / 2)
    for k in range(n + 1):
        for kp in range(n + 1):
            hs, mn = hs_link(space, n, k, kp)
            p = dict(base, k=k, k_prime=kp)
            links.append(CheckReport("hs_link", lhs=hs, rhs=target, tolerance=tol, params=p,
                                     notes="Hilbert-Schmidt value against C d^{n/2}"))
            links.append(CheckReport("min_le_hs", lhs=mn, rhs=hs, tolerance=tol, params=p,
                                     notes="min norm dominated by Hilbert-Schmidt norm"))
    bound = C**3 * (n + 1) ** 2 * d ** (n / 2)
    return bound, links


def crossing_index(d: int, q: float, n_max: int = 100_000) -> int:
    """Smallest ``n`` with ``d^{n/2} > C^3 (n+1)^2``, ``C`` at ``|q|``."""
    if d < 2:
        raise ValueError("no crossing for d < 2")
    C3 = c_q_constant(abs(q)) ** 3
    if q == 0:
        # integer comparison d^n > (n+1)^4
        for n in range(1, n_max):
            if d**n > (n + 1) ** 4:
                return n
    for n in range(1, n_max):
        if 0.5 * n * np.log(d) > np.log(C3) + 2 * np.log(n + 1):
            return n
    raise RuntimeError("no crossing found")


def wep_lower_bound(space: DeformedFockSpace, n: int) -> float:
    """``sum_i <J U xi_i, W(xi_i)^* Omega>_T`` with ``J`` the entrywise conjugation."""
    Xi = t_orthonormal_basis(space, n)
    G = space.gram(n)
    U = space.reversal(n)
    total = 0.0
    for i in range(Xi.shape[1]):
        xi = Xi[:, i]
        Wadj_omega = wick(space, xi, n).adjoint().apply(space.vacuum())[space.sl(n)]
        total += G.inner(np.conj(U @ xi), Wadj_omega)
    return float(np.real(total))


def run_witness(space: DeformedFockSpace, n: int, tol: float = 1e-8) -> WitnessReport:
    tr = trace_side(space, n)
    mn = witness_min_norm(space, n)
    bound, links = chain_upper_bound(space, n, tol)
    d = space.d
    base = {"d": d, "n": n, "N": space.N, "q_bound": space.T.q_bound, "anchor": "witness_chain"}
    links.insert(0, CheckReport("trace_side", lhs=abs(tr - d**n), rhs=0.0, tolerance=1e-12 * d**n, params=base,
                                notes="sum of tau(W*W) over a T-orthonormal basis equals d^n"))
    links.append(CheckReport("min_norm_le_chain", lhs=mn, rhs=bound, tolerance=tol, params=base,
                             truncation_flag=True, notes="truncated lower bound against C^3 (n+1)^2 d^{n/2}"))
    wep = wep_lower_bound(space, n)
    links.append(CheckReport("wep_pairing", lhs=abs(wep - d**n), rhs=0.0, tolerance=1e-9 * d**n, params=base,
                             notes="vacuum pairing lower bound of the max norm"))
    return WitnessReport(params=base, trace_value=tr, computed_min_norm=mn, chain_upper_bound=bound, links=links,
                         crossing_index=crossing_index(d, space.T.q_bound) if d >= 2 else None)
