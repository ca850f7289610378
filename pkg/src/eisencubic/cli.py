"""Command line interface: `eisencubic <command> [options]`.

Every command writes its artifact (CSV with a versioned header comment, or
JSON) to --out or stdout; timings and summaries go to stderr so artifacts
are byte-identical for identical options.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import all_lambdas, classify, cubic_symbol_fast, cubic_symbol_slow
from .density import (
    FAMILIES,
    density_csv,
    nonvanishing_bound,
    one_level_density_primeside,
    one_level_density_zeroside,
)
from .eisenstein import ONE, EisensteinInt, is_primary
from .errors import EisencubicError
from .gauss import gauss_direct, gauss_fast
from .hsums import geometric_grid, h_grid, vaughan_decompose
from .lfunction import fe_residual, find_zeros, ldata_for_fe, ldata_for_height
from .sieve import prime_table
from .testfunctions import TESTFUNCTIONS, WEIGHTS, phi_from_config, weight_from_config
from . import verify as suite

_NEGATIVE_VALUE = re.compile(r"^-\d[\d.,eE+-]*$")

COMMANDS = ("sieve", "symbol", "gauss", "verify", "lfun", "density", "hsum", "nonvanish")


def parse_eis(text) -> EisensteinInt:
    """'a,b' or 'a' (or a two-element list from a JSON config) as a + b w."""
    if isinstance(text, (list, tuple)):
        return EisensteinInt(int(text[0]), int(text[1]))
    parts = str(text).replace(" ", "").split(",")
    if len(parts) == 1:
        return EisensteinInt(int(parts[0]), 0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return EisensteinInt(int(parts[0]), int(parts[1]))


def parse_number(text) -> float:
    """Float that also accepts '1e5' and fractions like '13/11'."""
    try:
        return float(Fraction(str(text)))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


@dataclass
class RunConfig:
    command: str
    workers: int = 1
    seed: int = 0
    out: str | None = None
    options: dict = field(default_factory=dict)

    BOUNDS = ("X", "Z", "B", "y", "T", "max_norm", "Zmin", "Zmax", "family_bound")

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        for key in self.BOUNDS:
            val = self.options.get(key)
            if val is not None and val <= 0:
                raise ValueError(f"{key} must be positive")
        v = self.options.get("v")
        if v is not None and parse_number(v) <= 0:
            raise ValueError("v must be positive")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        d = dict(vars(ns))
        cfg = cls(d.pop("command"), d.pop("workers"), d.pop("seed"), d.pop("out"))
        d.pop("config", None)
        d.pop("handler", None)
        cfg.options = d
        return cfg


# ------------------------------------------------------------ output helpers

def _csv(schema: str, header, rows) -> str:
    buf = io.StringIO()
    buf.write(schema + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# ------------------------------------------------------------ commands

def cmd_sieve(cfg: RunConfig) -> int:
    table = prime_table(int(cfg.options["B"]))
    rows = ((p.a, p.b, p.norm()) for p in table.primes)
    _emit(cfg, _csv("# eisencubic primes v1", ("a", "b", "norm"), rows))
    _note(f"{len(table)} primary primes of norm <= {table.bound}")
    return 0


def cmd_symbol(cfg: RunConfig) -> int:
    o = cfg.options
    pairs = []
    if o["a"] is not None and o["n"] is not None:
        pairs.append((o["a"], o["n"]))
    if o["random"]:
        rng = np.random.default_rng(cfg.seed)
        for _ in range(o["random"]):
            pairs.append((suite._random_element(rng, 10**6), suite._random_primary(rng, int(o["max_norm"]))))
    if not pairs:
        raise ValueError("give --a and --n, or --random K")
    rows, bad = [], 0
    for a, n in pairs:
        fast, slow = cubic_symbol_fast(a, n), cubic_symbol_slow(a, n)
        bad += fast != slow
        rows.append((a.a, a.b, n.a, n.b, "" if fast.is_zero else fast.e, "" if slow.is_zero else slow.e))
    _emit(cfg, _csv("# eisencubic symbol v1", ("a_a", "a_b", "n_a", "n_b", "fast", "slow"), rows))
    _note(f"{len(pairs)} symbols, {bad} disagreements")
    return 1 if bad else 0


def cmd_gauss(cfg: RunConfig) -> int:
    o = cfg.options
    if o["matrix"]:
        rows = suite.prime_power_matrix()
        text = _csv("# eisencubic gauss-matrix v1", suite.MATRIX_COLUMNS,
                    [(p, j, k, br, repr(d.real), repr(d.imag), repr(e.real), repr(e.imag)) for p, j, k, br, d, e in rows])
        _emit(cfg, text)
        worst = max(abs(d - e) / max(1.0, abs(d)) for *_, d, e in rows)
        _note(f"{len(rows)} prime-power cases, worst relative mismatch {worst:.2e}")
        return 0 if worst < o["tol"] else 1
    r, moduli = o["r"], o["n"] or []
    if not moduli:
        raise ValueError("give one or more --n moduli, or --matrix")
    rows, worst = [], 0.0
    for n in moduli:
        fast = gauss_fast(r, n).value
        direct = gauss_direct(r, n).value if n.norm() <= o["direct_cap"] else None
        if direct is not None:
            worst = max(worst, abs(fast - direct) / max(1.0, abs(direct)))
        rows.append((r.a, r.b, n.a, n.b, repr(fast.real), repr(fast.imag),
                     "" if direct is None else repr(abs(fast - direct))))
    _emit(cfg, _csv("# eisencubic gauss v1", ("r_a", "r_b", "n_a", "n_b", "re_g", "im_g", "diff_direct"), rows))
    return 0 if worst < o["tol"] else 1


def cmd_verify(cfg: RunConfig) -> int:
    chosen = cfg.options["criteria"]
    crit = sorted({int(c) for c in str(chosen).split(",")}) if chosen else sorted(suite.CRITERIA)
    results = []
    for c in crit:
        if c not in suite.CRITERIA:
            raise ValueError(f"no criterion {c}")
        for res in suite.run_suite([c]):
            _note(f"[{res.criterion:2d}] {'pass' if res.passed else 'FAIL'}  {res.name}  ({res.seconds:.1f}s)")
            results.append(res)
    rows = [r.row()[:5] + (r.detail,) for r in results]
    header = tuple(c for c in suite.CHECK_COLUMNS if c != "seconds")
    _emit(cfg, _csv("# eisencubic verify v1", header, rows))
    return 0 if all(r.passed for r in results) else 1


def _fe_rows(n: EisensteinInt) -> list[tuple]:
    ld = ldata_for_fe(classify(n), suite.FE_GRID)
    ldb = ld.conjugate()
    return [(n.a, n.b, n.norm(), repr(s.real), repr(s.imag), repr(fe_residual(ld, s, ldb))) for s in suite.FE_GRID]


def cmd_lfun(cfg: RunConfig) -> int:
    o = cfg.options
    header = ("n_a", "n_b", "norm", "re_s", "im_s", "fe_residual")
    if o["family_bound"]:
        members = suite.thin_members(int(o["family_bound"]))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            blocks = list(pool.map(_fe_rows, members, chunksize=4))
        rows = [row for block in blocks for row in block]
    elif o["n"] is not None:
        rows = _fe_rows(o["n"])
    else:
        raise ValueError("give --n or --family-bound")
    _emit(cfg, _csv("# eisencubic lfun v1", header, rows))
    worst = max(float(r[-1]) for r in rows)
    _note(f"{len(rows)} functional-equation residuals, worst {worst:.2e}")
    if o["zeros"] and o["n"] is not None:
        zl = find_zeros(ldata_for_height(classify(o["n"]), o["T"]), o["T"])
        zl.to_csv(o["zeros"])
        _note(f"{len(zl)} zeros with |gamma| <= {o['T']} (winding count {zl.winding_count}) -> {o['zeros']}")
    return 0 if worst < o["tol"] else 1


def cmd_density(cfg: RunConfig) -> int:
    o = cfg.options
    w = weight_from_config(o["weight"])
    phi = phi_from_config(o["phi"], parse_number(o["v"]))
    if o["zeroside"]:
        rep = one_level_density_zeroside(o["family"], w, phi, o["X"], T=o["T"])
    else:
        rep = one_level_density_primeside(o["family"], w, phi, o["X"])
    _emit(cfg, density_csv([rep]))
    _note(f"{rep.members} members, D - phi_hat(0) = {rep.D_primeside - float(phi.phi_hat(0.0)):.6f}")
    return 0 if rep.consistent() else 1


def _lambda(spec) -> object:
    lams = all_lambdas()
    for lam in lams:
        if str(spec) in (lam.ident, str(lams.index(lam))):
            return lam
    raise ValueError(f"unknown lambda {spec!r}; use 0-{len(lams) - 1} or psiK")


def cmd_hsum(cfg: RunConfig) -> int:
    o = cfg.options
    lam = _lambda(o["lam"])
    if o["vaughan_Z"]:
        rep = vaughan_decompose(o["vaughan_Z"], o["r"], o["u"], lam)
        _emit(cfg, rep.to_json() + "\n")
        _note(f"identity residual {rep.identity_residual:.2e}")
        return 0
    rep = h_grid(geometric_grid(o["Zmin"], o["Zmax"], o["count"]), o["r"], lam)
    _emit(cfg, rep.to_csv())
    _note(f"slope {rep.slope:.4f}, 95% CI ({rep.slope_ci[0]:.4f}, {rep.slope_ci[1]:.4f})")
    return 0


def cmd_nonvanish(cfg: RunConfig) -> int:
    o = cfg.options
    v = Fraction(str(o["v"]))
    rep = nonvanishing_bound(o["family"], v, o["X"], weight_from_config(o["weight"]) if o["X"] else None)
    out = {"family": rep.family, "v": str(rep.v), "asymptotic": str(rep.asymptotic),
           "asymptotic_float": float(rep.asymptotic), "X": rep.X, "D": rep.D, "empirical": rep.empirical}
    _emit(cfg, json.dumps(out, sort_keys=True) + "\n")
    return 0


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (keys are option names)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--tol", type=float, default=1e-6)

    p = argparse.ArgumentParser(prog="eisencubic", description="Cubic characters and Gauss sums over Z[w].")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="build and cache the primary prime table")
    s.add_argument("--B", type=parse_number, default=1e6)

    s = sub.add_parser("symbol", parents=[common], help="cubic symbols, fast against slow")
    s.add_argument("--a", type=parse_eis)
    s.add_argument("--n", type=parse_eis)
    s.add_argument("--random", type=int, default=0, help="number of random pairs to cross-check")
    s.add_argument("--max-norm", dest="max_norm", type=parse_number, default=1e6)

    s = sub.add_parser("gauss", parents=[common], help="Gauss sums and the prime-power test matrix")
    s.add_argument("--r", type=parse_eis, default=ONE)
    s.add_argument("--n", type=parse_eis, nargs="*")
    s.add_argument("--matrix", action="store_true")
    s.add_argument("--direct-cap", dest="direct_cap", type=int, default=10**6)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("--criteria", help="comma separated criterion numbers (default all)")

    s = sub.add_parser("lfun", parents=[common], help="functional-equation residuals and zeros")
    s.add_argument("--n", type=parse_eis)
    s.add_argument("--family-bound", dest="family_bound", type=parse_number,
                   help="every thin character with N(n) up to this bound")
    s.add_argument("--T", type=float, default=25.0)
    s.add_argument("--zeros", help="write the zeros of --n up to height T to this CSV")

    s = sub.add_parser("density", parents=[common], help="one-level density report")
    s.add_argument("--family", choices=FAMILIES, default="thin")
    s.add_argument("--X", type=parse_number, default=1e5)
    s.add_argument("--v", default="0.5")
    s.add_argument("--phi", choices=sorted(TESTFUNCTIONS), default="fejer")
    s.add_argument("--weight", choices=sorted(WEIGHTS), default="gaussian")
    s.add_argument("--zeroside", action="store_true", help="also sum over computed zeros")
    s.add_argument("--T", type=float, default=25.0)

    s = sub.add_parser("hsum", parents=[common], help="H statistic grid and slope, or a Vaughan decomposition")
    s.add_argument("--r", type=parse_eis, default=ONE)
    s.add_argument("--lambda", dest="lam", default="0")
    s.add_argument("--Zmin", type=parse_number, default=1e3)
    s.add_argument("--Zmax", type=parse_number, default=1e6)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--vaughan-Z", dest="vaughan_Z", type=parse_number)
    s.add_argument("--u", type=parse_number, default=1.0)

    s = sub.add_parser("nonvanish", parents=[common], help="non-vanishing proportion from the density")
    s.add_argument("--family", choices=FAMILIES, default="thin")
    s.add_argument("--v", default="13/11")
    s.add_argument("--X", type=parse_number)
    s.add_argument("--weight", choices=sorted(WEIGHTS), default="gaussian")

    # let values such as -2,-3 through as arguments rather than options
    for q in (p, *sub.choices.values()):
        q._negative_number_matcher = _NEGATIVE_VALUE
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    ns = parser.parse_args(argv)
    if not ns.config:
        return ns
    with open(ns.config) as fh:
        conf = json.load(fh)
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    known = {a.dest for a in sub._actions}
    unknown = sorted(set(conf) - known)
    if unknown:
        sub.error(f"unknown config keys: {', '.join(unknown)}")
    defaults = {}
    for a in sub._actions:
        if a.dest in conf:
            val = conf[a.dest]
            if a.type is not None and val is not None and not isinstance(val, bool):
                val = [a.type(x) for x in val] if a.nargs == "*" else a.type(val)
            defaults[a.dest] = val
    sub.set_defaults(**defaults)
    # command line flags still win over the file
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = _apply_config(parser, argv)
    cfg = RunConfig.from_namespace(ns)
    try:
        cfg.validate()
        n = cfg.options.get("n")
        if isinstance(n, EisensteinInt) and not is_primary(n):
            raise ValueError(f"modulus {n!r} is not primary")
        return HANDLERS[cfg.command](cfg)
    except (ValueError, EisencubicError) as exc:
        _note(f"eisencubic {cfg.command}: error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
