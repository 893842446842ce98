"""Command-line entry point.

Subcommands ``verify``, ``witness``, ``araki`` and ``info``.  Configuration
comes from an optional flat ``key = value`` file (``--config``) overridden by
flags.  Exit codes: 0 all checks pass, 1 some check failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .deformation import DeformationError
from .kernels import BACKEND
from .numerics import NumericsError
from .report import _num, emit_report, to_csv, to_json
from .suites import ALIASES, DEFAULT_TOLERANCES, SUITES, RunConfig, crossing_report, run_suites, witness_series
from .witness import MATRIX_BUDGET

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KEYS = ("deformation", "d", "q", "qmatrix", "tmatrix", "N", "n", "p", "seed", "tol", "suite", "out", "format",
        "lambdas", "fixed_dim", "tcut", "instances")

SUBCOMMAND_DEFAULTS = {
    "verify": {},
    "witness": {"q": 0.0, "N": 6, "n_range": (1, 4)},
    "araki": {"N": 4, "n_range": (1, 2), "q": 0.5, "suites": ("araki",)},
    "info": {},
}


class ConfigError(ValueError):
    def __init__(self, field: str, message: str, line: int | None = None):
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}field '{field}': {message}")
        self.field = field
        self.line = line


# -- parsing helpers ---------------------------------------------------------


def read_matrix(path: str | Path) -> np.ndarray:
    """Plain-text complex matrix: ``rows cols`` then row-major ``re im`` pairs."""
    tokens = Path(path).read_text(encoding="utf-8").split()
    if len(tokens) < 2:
        raise ValueError("missing 'rows cols' header")
    rows, cols = int(tokens[0]), int(tokens[1])
    vals = tokens[2:]
    if len(vals) != 2 * rows * cols:
        raise ValueError(f"expected {2 * rows * cols} numbers after the header, found {len(vals)}")
    arr = np.array([float(v) for v in vals]).reshape(rows, cols, 2)
    return arr[..., 0] + 1j * arr[..., 1]


def write_matrix(path: str | Path, M) -> None:
    M = np.asarray(M, dtype=complex)
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    for row in M:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_range(text: str) -> tuple[int, int]:
    s = str(text).strip()
    if ".." in s:
        a, b = s.split("..", 1)
    else:
        a = b = s
    lo, hi = int(a), int(b)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range {s!r}")
    return lo, hi


def parse_lambdas(text: str) -> tuple[float, ...]:
    """Comma list; ``2*3`` means the value 2 with multiplicity 3."""
    out: list[float] = []
    for item in str(text).replace(" ", "").split(","):
        if not item:
            continue
        if "*" in item:
            v, m = item.split("*", 1)
            out += [float(v)] * int(m)
        else:
            out.append(float(item))
    return tuple(out)


def parse_tols(items) -> dict:
    if isinstance(items, str):
        items = [items]
    out = {}
    for item in items:
        for part in str(item).split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise ValueError(f"expected name=value, got {part!r}")
            k, v = part.split("=", 1)
            k = k.strip()
            if k not in DEFAULT_TOLERANCES:
                raise ValueError(f"unknown tolerance {k!r}")
            val = float(v)
            if not val >= 0:
                raise ValueError(f"tolerance {k} must be non-negative")
            out[k] = val
    return out


def parse_suites(text: str) -> tuple[str, ...]:
    names = [s.strip() for s in str(text).split(",") if s.strip()]
    out = []
    for s in names:
        s = ALIASES.get(s, s)
        if s == "all":
            return SUITES
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}")
        out.append(s)
    return tuple(x for x in SUITES if x in out)


def read_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment.  Returns ``{key: (value, line)}``."""
    out = {}
    for no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("?", "expected 'key = value'", no)
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(key, "unknown key", no)
        if key == "tol" and key in out:
            out[key] = (out[key][0] + "," + val, no)
        else:
            out[key] = (val, no)
    return out


# -- resolution --------------------------------------------------------------


def resolve_config(command: str, args: argparse.Namespace) -> RunConfig:
    """Merge file values and flags (flags win) and validate every field."""
    raw: dict = {}
    if getattr(args, "config", None):
        try:
            raw = read_config_file(args.config)
        except OSError as exc:
            raise ConfigError("config", str(exc)) from exc
    for key in KEYS:
        attr = key.replace("-", "_")
        val = getattr(args, attr, None)
        if val is None or (key == "tol" and not val):
            continue
        if key == "tol":
            prev = raw.get("tol", ("", None))[0]
            val = ",".join([prev] + list(val)) if prev else ",".join(val)
        raw[key] = (val, None)

    cfg = replace(RunConfig(), **SUBCOMMAND_DEFAULTS.get(command, {}))
    cfg.tolerances = dict(DEFAULT_TOLERANCES)
    fields: dict = {}

    def take(key, conv, check=None, msg="invalid value"):
        if key not in raw:
            return None
        val, line = raw[key]
        try:
            out = conv(val)
        except (ValueError, TypeError, OSError) as exc:
            raise ConfigError(key, f"{msg}: {exc}", line) from exc
        if check is not None and not check(out):
            raise ConfigError(key, f"{msg}: {val!r}", line)
        fields[key] = line
        return out

    d = take("d", int, lambda x: x >= 1, "must be a positive integer")
    q = take("q", float, lambda x: -1 < x < 1, "must lie in (-1, 1)")
    Q = take("qmatrix", read_matrix, None, "unreadable matrix file")
    Tm = take("tmatrix", read_matrix, None, "unreadable matrix file")
    kind = take("deformation", str, lambda x: x in ("q_flip", "q_matrix", "custom"),
                "must be q_flip, q_matrix or custom")
    if kind is None:
        kind = "custom" if Tm is not None else ("q_matrix" if Q is not None else "q_flip")
    cfg.kind = kind
    if kind == "q_matrix":
        if Q is None:
            raise ConfigError("qmatrix", "q_matrix deformation needs --qmatrix")
        if Q.shape[0] != Q.shape[1]:
            raise ConfigError("qmatrix", f"matrix must be square, got {Q.shape}", fields.get("qmatrix"))
        if d is not None and d != Q.shape[0]:
            raise ConfigError("d", f"d={d} conflicts with the {Q.shape[0]}x{Q.shape[0]} q matrix", fields.get("d"))
        cfg.Q, d = Q, Q.shape[0]
    elif kind == "custom":
        if Tm is None:
            raise ConfigError("tmatrix", "custom deformation needs --tmatrix")
        m = int(round(np.sqrt(Tm.shape[0])))
        if Tm.shape[0] != Tm.shape[1] or m * m != Tm.shape[0]:
            raise ConfigError("tmatrix", f"matrix must be d^2 x d^2, got {Tm.shape}", fields.get("tmatrix"))
        if d is not None and d != m:
            raise ConfigError("d", f"d={d} conflicts with the d^2 x d^2 tmatrix (d={m})", fields.get("d"))
        cfg.T, d = Tm, m
    if d is not None:
        cfg.d = d
    if q is not None:
        cfg.q = q
    v = take("N", int, lambda x: x >= 0, "must be a non-negative integer")
    if v is not None:
        cfg.N = v
    v = take("n", parse_range, None, "expected a..b")
    if v is not None:
        cfg.n_range = v
    v = take("p", int, lambda x: x >= 1, "must be a positive integer")
    if v is not None:
        cfg.p = v
    v = take("seed", int, lambda x: 0 <= x < 2**64, "must be an integer in [0, 2^64)")
    if v is not None:
        cfg.seed = v
    v = take("instances", int, lambda x: x >= 1, "must be a positive integer")
    if v is not None:
        cfg.instances = v
    v = take("tol", parse_tols, None, "bad tolerance override")
    if v:
        cfg.tolerances.update(v)
    v = take("suite", parse_suites, None, "bad suite list")
    if v is not None:
        if not v:
            raise ConfigError("suite", "empty suite selection", fields.get("suite"))
        cfg.suites = v
    v = take("format", str, lambda x: x in ("json", "csv"), "must be json or csv")
    if v is not None:
        cfg.fmt = v
    v = take("out", str, lambda x: len(x) > 0, "empty path")
    if v is not None:
        cfg.out = v
    v = take("lambdas", parse_lambdas, lambda x: all(lam > 1 for lam in x), "every lambda must exceed 1")
    if v is not None:
        cfg.lambdas = v
    v = take("fixed_dim", int, lambda x: x >= 0, "must be a non-negative integer")
    if v is not None:
        cfg.fixed_dim = v
    if cfg.fixed_dim + 2 * len(cfg.lambdas) < 1:
        raise ConfigError("fixed_dim", "the quasi-free one-particle space is empty", fields.get("fixed_dim"))
    v = take("tcut", float, lambda x: x > 1, "must exceed 1")
    if v is not None:
        cfg.t_cut = v

    if cfg.n_range[1] > cfg.N and command in ("witness",):
        raise ConfigError("n", f"level {cfg.n_range[1]} exceeds N={cfg.N}", fields.get("n"))
    try:
        T = cfg.deformation()
    except (DeformationError, NumericsError, ValueError) as exc:
        fld = {"q_matrix": "qmatrix", "custom": "tmatrix"}.get(cfg.kind, "q")
        raise ConfigError(fld, str(exc), fields.get(fld)) from exc
    if command == "witness" or (command == "verify" and "witness" in cfg.suites):
        dim = sum(T.d**k for k in range(cfg.N + 1))
        if dim**2 > MATRIX_BUDGET:
            raise ConfigError("N", f"doubled Fock dimension {dim**2} exceeds the budget {MATRIX_BUDGET}",
                              fields.get("N"))
    return cfg


# -- output ------------------------------------------------------------------


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def write_meta(cfg: RunConfig, command: str, out: str, extra: dict | None = None) -> None:
    """Sidecar ``<out>.meta.json`` with the timestamp and run header (excluded from comparisons)."""
    meta = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "command": command,
        "version": __version__,
        "backend": BACKEND,
        "config": cfg.summary(),
        "suites": list(cfg.suites),
        "tolerances": cfg.tolerances,
    }
    meta.update(extra or {})
    Path(str(out) + ".meta.json").write_text(json.dumps(_num(meta), indent=2) + "\n", encoding="utf-8")


def _summarize(reports, stream=sys.stderr) -> int:
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed", file=stream)
    for r in failed:
        print(f"FAIL {r.name} lhs={r.lhs:.6g} rhs={r.rhs:.6g} slack={r.slack:.3g} params={_num(r.params)}",
              file=stream)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(cfg: RunConfig, command: str = "verify") -> int:
    reports = run_suites(cfg)
    if cfg.out is None:
        _write(to_json(reports) if cfg.fmt == "json" else to_csv(reports), None)
    else:
        emit_report(reports, cfg.out, cfg.fmt)
        write_meta(cfg, command, cfg.out)
    return _summarize(reports)


def cmd_witness(cfg: RunConfig) -> int:
    T = cfg.deformation()
    if not T.tracial:
        raise ConfigError("deformation", "the witness chain needs a tracial deformation")
    series = witness_series(cfg)
    links = [r for rep in series for r in rep.links]
    cross = crossing_report(T.d, T.q_bound) if T.d >= 2 else None
    if cfg.fmt == "json":
        rows = [_num(rep.as_dict()) for rep in series]
        text = json.dumps(rows, indent=2)
    else:
        text = to_csv(links + ([cross] if cross is not None else []))
    _write(text, cfg.out)
    if cfg.out is not None:
        write_meta(cfg, "witness", cfg.out)
    for rep in series:
        print(f"n={rep.params['n']} trace={rep.trace_value:.15g} min_norm={rep.computed_min_norm:.15g} "
              f"chain_bound={rep.chain_upper_bound:.15g} crossing_index={rep.crossing_index}", file=sys.stderr)
    return _summarize(links)


def cmd_info(cfg: RunConfig) -> int:
    T = cfg.deformation()
    sp_dims = [T.d**k for k in range(cfg.N + 1)]
    info = {
        "version": __version__,
        "backend": BACKEND,
        "suites": list(SUITES),
        "aliases": ALIASES,
        "tolerances": cfg.tolerances,
        "config": cfg.summary(),
        "deformation": {"kind": T.kind, "q_bound": T.q_bound, "braid_residual": T.braid_residual,
                        "tracial_residual": T.tracial_residual, "tracial": T.tracial},
        "fock_dimension": int(sum(sp_dims)),
        "matrix_budget": MATRIX_BUDGET,
    }
    print(json.dumps(_num(info), indent=2))
    return EXIT_OK


# -- argparse ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--deformation", choices=("q_flip", "q_matrix", "custom"))
    p.add_argument("--d", type=str)
    p.add_argument("--q", type=str)
    p.add_argument("--qmatrix", help="d x d matrix file of q_ij")
    p.add_argument("--tmatrix", help="d^2 x d^2 matrix file of T")
    p.add_argument("--N", type=str, help="truncation level")
    p.add_argument("--n", type=str, help="level range a..b")
    p.add_argument("--p", type=str, help="coefficient matrix size")
    p.add_argument("--seed", type=str)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--suite", type=str, help="comma list of suites")
    p.add_argument("--out", type=str)
    p.add_argument("--format", type=str)
    p.add_argument("--instances", type=str, help="random instances per check")
    p.add_argument("--lambdas", type=str, help="eigenvalues > 1, e.g. 2,3*2")
    p.add_argument("--fixed-dim", dest="fixed_dim", type=str)
    p.add_argument("--tcut", type=str)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ybfock", description="Deformed Fock space checks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")
    for name, text in (("verify", "run check suites"), ("witness", "run the witness chain"),
                       ("araki", "run the quasi-free checks"), ("info", "show backend and resolved config")):
        _common(sub.add_parser(name, help=text))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = resolve_config(args.command, args)
        if args.command == "verify" or args.command == "araki":
            return cmd_verify(cfg, args.command)
        if args.command == "witness":
            return cmd_witness(cfg)
        return cmd_info(cfg)
    except ConfigError as exc:
        print(f"ybfock {args.command}: config error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ybfock {args.command}: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
