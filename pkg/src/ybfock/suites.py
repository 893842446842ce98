"""Check suites run by the command-line front end.

Every suite takes a resolved :class:`RunConfig` and a private random stream
and returns a list of :class:`CheckReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import araki, deformation, fock, opspace, symgroup, wick, witness
from .fock import DeformedFockSpace, c_q_constant
from .numerics import GramForm, weighted_operator_norm
from .report import CheckReport, identity_report
from .rng import SplitMix64

DEFAULT_TOLERANCES = {
    "braid": 1e-10,
    "tracial": 1e-12,
    "hermitian": 1e-10,
    "factorization": 1e-9,
    "recursive": 1e-9,
    "norm": 1e-8,
    "commutation": 1e-10,
    "wick_vacuum": 1e-10,
    "bozejko_low": 1e-10,
    "bozejko_high": 1e-8,
    "compression": 1e-10,
    "wick_identity": 1e-9,
    "khintchine": 1e-9,
    "witness": 1e-8,
    "trace": 1e-12,
    "wep": 1e-9,
    "polar": 1e-10,
    "araki": 1e-9,
    "pipeline": 1e-12,
}

SUITES = (
    "deformation-validity",
    "fock-identities",
    "wick",
    "khintchine-free",
    "khintchine-deformed",
    "araki",
    "witness",
)
ALIASES = {"fock": "fock-identities", "deformation": "deformation-validity", "free": "khintchine-free",
           "deformed": "khintchine-deformed"}


@dataclass
class RunConfig:
    kind: str = "q_flip"
    d: int = 2
    q: float = 0.5
    Q: np.ndarray | None = None
    T: np.ndarray | None = None
    N: int = 5
    n_range: tuple[int, int] = (0, 3)
    p: int = 2
    seed: int = 20240601
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    lambdas: tuple[float, ...] = (2.0,)
    fixed_dim: int = 0
    t_cut: float = 1.3
    suites: tuple[str, ...] = SUITES
    out: str | None = None
    fmt: str = "json"
    instances: int = 3

    def deformation(self) -> deformation.YangBaxterOperator:
        if self.kind == "q_flip":
            return deformation.make_q_flip(self.d, self.q)
        if self.kind == "q_matrix":
            return deformation.make_qij(self.Q)
        if self.kind == "custom":
            return deformation.from_matrix(self.T, kind="custom")
        raise ValueError(f"unknown deformation kind {self.kind!r}")

    @property
    def levels(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])

    def summary(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "N": self.N, "n": f"{self.n_range[0]}..{self.n_range[1]}",
               "p": self.p, "seed": self.seed}
        if self.kind == "q_flip":
            out["q"] = self.q
        return out


def _p(cfg: RunConfig, T, **kw) -> dict:
    out = {"kind": T.kind, "d": T.d, "q_bound": T.q_bound}
    out.update(kw)
    return out


# -- deformation -----------------------------------------------------------


def suite_deformation(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T = cfg.deformation()
    out = [
        identity_report("braid_relation", T.braid_residual, cfg.tol("braid"), params=_p(cfg, T, anchor="braid_relation")),
        CheckReport("strict_contraction", lhs=T.q_bound, rhs=1.0, tolerance=0.0, params=_p(cfg, T, anchor="contraction"),
                    notes="||T|| < 1 is enforced at construction; slack is 1 - ||T||"),
    ]
    if T.tracial:
        out.append(identity_report("cyclic_condition", T.tracial_residual, cfg.tol("tracial"),
                                   params=_p(cfg, T, anchor="cyclic_condition")))
    else:
        out.append(CheckReport("cyclic_condition_violated", lhs=1e-3, rhs=T.tracial_residual, tolerance=0.0,
                               params=_p(cfg, T, anchor="cyclic_condition"),
                               notes="non-tracial deformation: residual must be visibly positive"))
    worst = 0.0
    for n in range(2, 5):
        for _ in range(cfg.instances):
            img = list(range(n))
            for i in range(n - 1, 0, -1):
                j = int(rng.next_u64() % (i + 1))
                img[i], img[j] = img[j], img[i]
            sigma = tuple(img)
            a = deformation.phi_word(T, symgroup.reduced_word(sigma), n)
            b = deformation.phi_word(T, symgroup.reduced_word_left(sigma), n)
            worst = max(worst, float(np.max(np.abs(a - b))))
    out.append(identity_report("phi_word_independence", worst, cfg.tol("braid"),
                               params=_p(cfg, T, anchor="quasi_multiplicative_extension")))
    if T.kind == "q_flip":
        from .kernels import permutation_matrix

        worst = 0.0
        for n in range(1, 5):
            for sigma in symgroup.all_permutations(n):
                ref = cfg.q ** symgroup.inversions(sigma) * permutation_matrix(np.asarray(sigma, dtype=np.int64), T.d, n)
                worst = max(worst, float(np.max(np.abs(deformation.phi(T, sigma) - ref))))
        out.append(identity_report("phi_closed_form", worst, 1e-12, params=_p(cfg, T, anchor="q_flip_closed_form")))
    return out


# -- fock ------------------------------------------------------------------


def suite_fock(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T = cfg.deformation()
    sp = DeformedFockSpace(T, cfg.N)
    C = c_q_constant(T.q_bound)
    out = []
    top = min(cfg.N, symgroup.MAX_ENUMERATION, 5)
    worst_fact = worst_rec = worst_rev = 0.0
    for n in range(top + 1):
        P = sp.symmetrizers[n]
        for k in range(n + 1):
            R = fock.r_nk(T, n, k) @ np.kron(sp.symmetrizers[n - k], sp.symmetrizers[k])
            worst_fact = max(worst_fact, np.linalg.norm(P - R) / np.linalg.norm(P))
        worst_rec = max(worst_rec, np.linalg.norm(fock.symmetrizer_recursive(T, n) - fock.symmetrizer(T, n))
                        / np.linalg.norm(P))
        U = sp.reversal(n)
        worst_rev = max(worst_rev, float(np.max(np.abs(U @ P - P @ U))))
    base = _p(cfg, T, N=cfg.N, n_max=top)
    out.append(identity_report("symmetrizer_factorization", worst_fact, cfg.tol("factorization"),
                               params=dict(base, anchor="coset_factorization")))
    out.append(identity_report("symmetrizer_recursive_vs_direct", worst_rec, cfg.tol("recursive"),
                               params=dict(base, anchor="coset_factorization")))
    F = deformation.flip(T.d)
    if np.max(np.abs(F @ T.matrix @ F - T.matrix)) < 1e-14:
        # only flip-symmetric T make the reversal commute with P^(n)
        out.append(identity_report("reversal_commutes", worst_rev, 1e-12,
                                   params=dict(base, anchor="reversal_symmetry")))
    for n in range(2, top + 1):
        for k in range(n + 1):
            Gn = sp.gram(n)
            Gt = sp.gram(n - k).kron(sp.gram(k))
            Rs = fock.r_nk_star(T, n, k)
            p = dict(base, n=n, k=k, C_q=C, anchor="r_star_norm")
            out.append(CheckReport("r_star_to_tensor", lhs=weighted_operator_norm(Rs, Gt, Gn), rhs=np.sqrt(C),
                                   tolerance=cfg.tol("norm"), params=p))
            out.append(CheckReport("r_star_to_T", lhs=weighted_operator_norm(Rs, Gn, Gn), rhs=C,
                                   tolerance=cfg.tol("norm"), params=p))
            c_up, d_low = fock.domination_constants(T, n, k)
            out.append(CheckReport("domination_upper", lhs=c_up, rhs=C, tolerance=cfg.tol("norm"),
                                   params=dict(p, anchor="domination", d_lower=d_low),
                                   notes=f"reverse domination constant {d_low:.15g} reported as data"))
    for n in cfg.levels:
        if n < 1 or n > cfg.N:
            continue
        worst = -np.inf
        for _ in range(cfg.instances):
            xi = rng.complex(T.d**n)
            lhs = fock.creation(sp, xi, n).norm()
            worst = max(worst, lhs - np.sqrt(C) * sp.norm(xi, n))
        out.append(CheckReport("creation_norm", lhs=worst, rhs=0.0, tolerance=cfg.tol("norm"),
                               params=dict(base, n=n, C_q=C, anchor="creation_bound"), truncation_flag=True,
                               notes="max over instances of ||a*(xi)|| - sqrt(C)||xi||_T"))
    out.append(identity_report("commutation_relation", commutation_residual(sp), cfg.tol("commutation"),
                               params=dict(base, anchor="deformed_commutation")))
    worst = 0.0
    for n in range(min(4, cfg.N) + 1):
        if n == 0:
            continue
        Xn = fock.creation(sp, fock.reverse_vector(np.eye(T.d**n)[0], T.d, n), n)
        worst = max(worst, float(np.max(np.abs((Xn.adjoint() - fock.annihilation(sp, np.eye(T.d**n)[0], n)).mat))))
    out.append(identity_report("creation_adjoint", worst, 1e-10, params=dict(base, anchor="ladder_adjoint")))
    if T.q_bound == 0:
        worst = max(opspace.free_projection_defect(sp, m) for m in range(1, cfg.N + 1))
        out.append(identity_report("free_projection", worst, 1e-12, params=dict(base, anchor="free_projection")))
    return out


def commutation_residual(sp: DeformedFockSpace) -> float:
    """``max || a(e_i)a*(e_j) - sum t^{ir}_{js} a*(e_r)a(e_s) - delta_ij ||`` on exact columns."""
    d = sp.d
    t = sp.T.coefficient_tensor
    E = np.eye(d, dtype=complex)
    cre = [fock.creation(sp, E[i], 1) for i in range(d)]
    ann = [fock.annihilation(sp, E[i], 1) for i in range(d)]
    ident = fock.identity(sp)
    worst = 0.0
    for i in range(d):
        for j in range(d):
            X = ann[i] @ cre[j] - (i == j) * ident
            for r in range(d):
                for s in range(d):
                    if t[i, r, j, s] != 0:
                        X = X - t[i, r, j, s] * (cre[r] @ ann[s])
            cols = X.exact_columns()
            worst = max(worst, float(np.max(np.abs(X.mat[:, cols]))))
    return worst


# -- wick ------------------------------------------------------------------


def suite_wick(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T = cfg.deformation()
    sp = DeformedFockSpace(T, cfg.N)
    out = []
    for n in cfg.levels:
        if n > cfg.N:
            continue
        base = _p(cfg, T, N=cfg.N, n=n)
        vac = adj = rec = comm = 0.0
        for _ in range(cfg.instances):
            xi = rng.complex(T.d**n)
            W = wick.wick(sp, xi, n)
            vac = max(vac, float(np.max(np.abs(W.apply(sp.vacuum()) - sp.embed(xi, n)))))
            adj = max(adj, wick.adjoint_identity_check(sp, xi, n))
            out.extend(wick.bozejko_check(sp, xi, n, cfg.tol("bozejko_low"), cfg.tol("bozejko_high")))
            if T.tracial:
                rec = max(rec, wick._rel_op_defect(W, wick.wick_recursive(sp, xi, n)))
                Gr = fock.right_gaussian(sp, rng.real(T.d))
                X = W @ Gr - Gr @ W
                comm = max(comm, float(np.max(np.abs(X.orthonormal()[:, X.exact_columns()]), initial=0.0)))
        out.append(identity_report("wick_vacuum", vac, cfg.tol("wick_vacuum"), params=dict(base, anchor="wick_vacuum")))
        out.append(identity_report("wick_adjoint", adj, cfg.tol("wick_identity"), params=dict(base, anchor="wick_adjoint")))
        if T.tracial:
            out.append(identity_report("wick_recursion_oracle", rec, cfg.tol("wick_identity"),
                                       params=dict(base, anchor="wick_formula")))
            out.append(identity_report("wick_right_commutation", comm, cfg.tol("commutation"),
                                       params=dict(base, anchor="right_commutant")))
        worst = 0.0
        for k in range(n + 1):
            worst = max(worst, wick.compression_identity_check(sp, rng.complex(T.d**n), n, k))
        out.append(identity_report("compression_identity", worst, cfg.tol("compression"),
                                   params=dict(base, anchor="compression_identity")))
    return out


# -- khintchine --------------------------------------------------------------


def _alphas(rng: SplitMix64, count: int, p: int) -> np.ndarray:
    return rng.complex((count, p, p))


def suite_khintchine_free(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T0 = deformation.make_q_flip(cfg.d, 0.0)
    out = []
    for n in cfg.levels:
        sp = DeformedFockSpace(T0, n + 2)
        for _ in range(cfg.instances):
            lo, up, _ = opspace.khintchine_free_check(sp, _alphas(rng, cfg.d**n, cfg.p), n, cfg.tol("khintchine"))
            out += [lo, up]
    sp = DeformedFockSpace(T0, max(cfg.levels[-1] + 2, 2))
    worst = max(opspace.free_projection_defect(sp, m) for m in range(1, sp.N + 1))
    out.append(identity_report("free_projection", worst, 1e-12, params={"d": cfg.d, "N": sp.N,
                                                                         "anchor": "free_projection"}))
    return out


def suite_khintchine_deformed(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T = cfg.deformation()
    out = []
    for n in cfg.levels:
        spaces = [DeformedFockSpace(T, N) for N in (n, n + 1, n + 2)] if n > 0 else [DeformedFockSpace(T, 2)]
        Xi = witness.t_orthonormal_basis(spaces[-1], n).T
        for _ in range(cfg.instances):
            A = _alphas(rng, T.d**n, cfg.p)
            mids = []
            for sp in spaces:
                lo, up, data = opspace.khintchine_deformed_check(sp, A, Xi, n, cfg.tol("khintchine"))
                mids.append(data["middle"])
            out += [lo, up]
            drop = max((mids[i] - mids[i + 1] for i in range(len(mids) - 1)), default=0.0)
            out.append(CheckReport("middle_trend_nondecreasing", lhs=drop, rhs=0.0, tolerance=cfg.tol("khintchine"),
                                   params=_p(cfg, T, n=n, middles=[float(m) for m in mids],
                                             anchor="vector_valued_khintchine"),
                                   truncation_flag=True, notes="middle term at N = n, n+1, n+2"))
        if n >= 1:
            sp = spaces[-1]
            A = _alphas(rng, 3, cfg.p)
            V = rng.complex((3, T.d**n))
            out.append(opspace.creation_cb_check(sp, A, V, n, cfg.tol("norm")))
            out.append(opspace.annihilation_cb_check(sp, A, V, n, cfg.tol("norm")))
    return out


# -- araki -------------------------------------------------------------------


def suite_araki(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    gen = araki.QuasiFreeGenerator(cfg.lambdas, cfg.fixed_dim)
    out = []
    G = araki.u_gram(gen)
    weights = np.diag(G.matrix).real
    lam = gen.spectrum
    out.append(identity_report("u_gram_weights", float(np.max(np.abs(weights - 2 * lam / (1 + lam)))), 1e-15,
                               params={"lambdas": list(gen.lambdas), "fixed_dim": gen.fixed_dim,
                                       "anchor": "quasi_free_scalar_product"}))
    base = {"lambdas": list(gen.lambdas), "fixed_dim": gen.fixed_dim, "q": cfg.q}
    nmax = max(cfg.levels[-1], 1)
    sp = araki.quasi_free_fock(gen, cfg.q, max(cfg.N, nmax))
    polar = iso = inv = 0.0
    for n in range(nmax + 1):
        polar = max(polar, araki.polar_residual(gen, n))
        Jn = sp.j_map(n)
        v, w = rng.complex(gen.d**n), rng.complex(gen.d**n)
        iso = max(iso, abs(sp.inner(Jn(v), Jn(w), n) - np.conj(sp.inner(v, w, n))))
        inv = max(inv, float(np.max(np.abs(Jn(Jn(v)) - v))))
    out.append(identity_report("polar_decomposition", polar, cfg.tol("polar"), params=dict(base, anchor="modular_polar")))
    out.append(identity_report("j_antiisometry", iso, cfg.tol("polar"), params=dict(base, anchor="modular_conjugation")))
    out.append(identity_report("j_involution", inv, cfg.tol("polar"), params=dict(base, anchor="modular_conjugation")))
    for n in range(1, min(nmax, 3) + 1):
        r1, r2, _ = araki.aw_trace_check(gen, n, q=cfg.q)
        out += [r1, r2]
    for n in cfg.levels:
        if n < 1:
            continue
        spn = araki.quasi_free_fock(gen, cfg.q, n + 2)
        for _ in range(cfg.instances):
            al = rng.complex(3)
            V = rng.complex((3, gen.d**n))
            out.extend(araki.hiai_scalar_check(spn, al, V, n, gen.norm_A, cfg.tol("araki")))
            lo, up, data = araki.quasi_free_khintchine_check(spn, _alphas(rng, gen.d**n, cfg.p), n, tol=cfg.tol("araki"))
            out += [lo, up]
        W = wick.right_wick(spn, rng.complex(gen.d**n), n)
        X = wick.wick(spn, rng.complex(gen.d**n), n)
        C = X @ W - W @ X
        out.append(identity_report("left_right_commute", float(np.max(np.abs(C.orthonormal()[:, C.exact_columns()]))),
                                   cfg.tol("commutation"), params=dict(base, n=n, anchor="quasi_free_commutant")))
    # the trivial generator reproduces the tracial pipeline
    n = min(max(cfg.levels[-1], 1), 2)
    gt = araki.QuasiFreeGenerator((), cfg.d)
    s3 = araki.quasi_free_fock(gt, cfg.q, n + 2)
    s1 = DeformedFockSpace(deformation.make_q_flip(cfg.d, cfg.q), n + 2)
    A = _alphas(rng, cfg.d**n, cfg.p)
    Xi = witness.t_orthonormal_basis(s1, n).T
    a = araki.quasi_free_khintchine_check(s3, A, n, Xi)[2]
    b = opspace.khintchine_deformed_check(s1, A, Xi, n)[2]
    diff = max(abs(x - y) for x, y in zip(a["reshaped"] + [a["middle"]], b["reshaped"] + [b["middle"]]))
    out.append(identity_report("trivial_generator_pipeline", diff, cfg.tol("pipeline"),
                               params={"d": cfg.d, "q": cfg.q, "n": n, "anchor": "quasi_free_khintchine"}))
    verdict = araki.spectral_criterion(gen.fixed_dim, gen.lambdas, cfg.t_cut)
    out.append(CheckReport("spectral_criterion", lhs=0.0, rhs=0.0, tolerance=0.0,
                           params=dict(base, t_cut=cfg.t_cut, verdict=verdict["verdict"], count=verdict["count"],
                                       ratio=verdict["ratio"], anchor="spectral_criterion"),
                           notes=verdict["reason"] + "; " + verdict["notes"]))
    if gen.lambdas:
        wit = araki.non_traciality_witness(gen, q=cfg.q)
        out.append(CheckReport("non_traciality_witness", lhs=0.01, rhs=wit["gap"], tolerance=0.0,
                               params=dict(base, pair=list(wit["pair"]), anchor="quasi_free_state"),
                               notes="|phi(XY) - phi(YX)| for the first pair found"))
    return out


# -- witness ---------------------------------------------------------------


def suite_witness(cfg: RunConfig, rng: SplitMix64) -> list[CheckReport]:
    T = cfg.deformation()
    if not T.tracial:
        return [CheckReport("witness_skipped", lhs=0.0, rhs=0.0, tolerance=0.0, params=_p(cfg, T),
                            notes="witness chain needs a tracial deformation")]
    out = []
    for rep in witness_series(cfg):
        out.extend(rep.links)
    if T.d >= 2:
        out.append(crossing_report(T.d, T.q_bound))
    return out


def witness_series(cfg: RunConfig) -> list[witness.WitnessReport]:
    T = cfg.deformation()
    sp = DeformedFockSpace(T, cfg.N)
    reps = []
    for n in cfg.levels:
        if n > cfg.N:
            raise ValueError(f"level {n} exceeds N={cfg.N}")
        reps.append(witness.run_witness(sp, n, cfg.tol("witness")))
    return reps


def crossing_report(d: int, q: float) -> CheckReport:
    n = witness.crossing_index(d, q)
    C3 = c_q_constant(abs(q)) ** 3
    return CheckReport("crossing_index", lhs=C3 * (n + 1) ** 2, rhs=d ** (n / 2), tolerance=0.0,
                       params={"d": d, "q": q, "crossing_index": n, "anchor": "witness_crossing"},
                       notes=f"smallest n with d^(n/2) > C^3 (n+1)^2 is {n}")


RUNNERS = {
    "deformation-validity": suite_deformation,
    "fock-identities": suite_fock,
    "wick": suite_wick,
    "khintchine-free": suite_khintchine_free,
    "khintchine-deformed": suite_khintchine_deformed,
    "araki": suite_araki,
    "witness": suite_witness,
}


def run_suites(cfg: RunConfig) -> list[CheckReport]:
    """Run the selected suites in canonical order, each on its own seeded stream."""
    out = []
    for idx, name in enumerate(SUITES):
        if name not in cfg.suites:
            continue
        stream = SplitMix64(cfg.seed).spawn(idx)
        out.extend(RUNNERS[name](cfg, stream))
    return out


__all__ = ["RunConfig", "SUITES", "ALIASES", "DEFAULT_TOLERANCES", "run_suites", "witness_series",
           "crossing_report", "commutation_residual", "GramForm"]
