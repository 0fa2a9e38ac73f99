"""Command line: thetareg <command> [options].

Polynomials are given highest degree first, as in coefficient tables:
``--eta 1,-3,0,-7,1,-1`` and ``--eta "x^5-3x^4-7x^2+x-1"`` are the same
element.  Every command writes JSON lines (to ``--out`` or stdout) and, when
``--out`` is given, a manifest ``<out>.manifest.json`` with the command
line, parameters, code version, wall time and a digest of the records.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

from . import __version__
from .fields import FieldError, parse_field

__all__ = ["main", "RunManifest", "parse_eta", "records_digest", "build_parser"]


# ---------------------------------------------------------------------------
# serialization


def _canon(rec) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"), default=str)


def records_digest(records) -> str:
    h = hashlib.sha256()
    for r in records:
        h.update(_canon(r).encode())
        h.update(b"\n")
    return h.hexdigest()


@dataclass
class RunManifest:
    argv: list
    command: str
    seed: int | None
    field: str | None
    params: dict
    version: str
    wall_time: float
    output_digest: str
    records: int
    anchor: str | None = None
    summary: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _emit(args, records: list, params: dict, t0: float, summary=None, anchor=None) -> None:
    lines = [_canon(r) for r in records]
    if args.out:
        with open(args.out, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
        man = RunManifest(
            list(args.argv), args.command, getattr(args, "seed", None), getattr(args, "field", None),
            params, __version__, round(time.time() - t0, 3), records_digest(records), len(records),
            anchor, summary or {},
        )
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(man.to_dict(), fh, indent=2, sort_keys=True, default=str)
    else:
        for line in lines:
            print(line)
    if summary is not None and args.out:
        print(json.dumps(summary, sort_keys=True, default=str))


# ---------------------------------------------------------------------------
# argument parsing


def parse_eta(text: str, fld) -> tuple:
    """Integer coefficients, low degree first, from a high-first list or a polynomial."""
    text = text.strip()
    if "x" in text:
        import sympy
        from sympy.parsing.sympy_parser import convert_xor, implicit_multiplication_application, parse_expr, standard_transformations

        x = sympy.Symbol("x")
        tr = standard_transformations + (implicit_multiplication_application, convert_xor)
        try:
            poly = sympy.Poly(parse_expr(text, local_dict={"x": x}, transformations=tr), x)
        except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        coeffs = poly.all_coeffs()
        if any(not c.is_integer for c in coeffs):
            raise ValueError("eta must have integer coefficients")
        high = [int(c) for c in coeffs]
    else:
        try:
            high = [int(t) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise ValueError(f"cannot parse coefficient list {text!r}") from exc
    if not high:
        raise ValueError("empty eta")
    try:
        return fld.element(high)
    except FieldError as exc:
        raise ValueError(str(exc)) from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _field(text: str):
    try:
        return parse_field(text)
    except (FieldError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected lo,hi") from exc
    return lo, hi


def _constraints(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            i, r = item.split("=")
            out.append((int(i), int(r)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad constraint {item!r}; expected index=residue") from exc
    return out


def _jobs_default() -> int:
    from .scanner import default_jobs

    return default_jobs()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thetareg", description="Local theta-regulators, Fermat quotients and prime scans.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="command")

    def common(p, seed=False):
        p.add_argument("--out", help="JSON-lines output file (default: stdout)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $THETAREG_JOBS or 1)")
        if seed:
            p.add_argument("--seed", type=int, default=12345)

    p = sub.add_parser("scan", help="primes p at which a regulator of eta vanishes")
    p.add_argument("--field", type=_field, required=True, help="quad:m, shanks:t (or c3:t), quintic11 (or c5), d6")
    p.add_argument("--eta", required=True, help="coefficients high degree first, or a polynomial in x")
    p.add_argument("--pmin", type=int, default=5)
    p.add_argument("--pmax", type=int, required=True, help="exclusive upper bound")
    p.add_argument("--chars", default=None, help="comma list of characters, or 'all' (default: nontrivial)")
    p.add_argument("--checkpoint", default=None)
    common(p)

    p = sub.add_parser("stats", help="fixed-p Monte Carlo experiment")
    p.add_argument("--field", type=_field, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trials", type=int, default=500_000)
    p.add_argument("--experiment", choices=["joint", "rank", "theta2", "delta2", "extra"], default="joint")
    p.add_argument("--range", type=_pair, default=None, help="draw coefficients in [lo,hi) instead of [0,p^2)")
    p.add_argument("--pair", default=None, help="theta2: two values of theta(s^-1), e.g. 2,4")
    common(p, seed=True)

    p = sub.add_parser("indep", help="density of prescribed coordinates of alpha")
    p.add_argument("--field", type=_field, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trials", type=int, default=500_000)
    p.add_argument("--constraints", type=_constraints, required=True, help="index=residue,... (index 0: constant term)")
    common(p, seed=True)

    p = sub.add_parser("extra-div", help="density of p^2 | chi2-regulator of random D6 integers")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--range", type=_pair, default=(-200, 200))
    common(p, seed=True)

    p = sub.add_parser("phi", help="normalized cyclotomic value Phi~_m(a)")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--factor", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("fermat-scan", help="primes with q_p(a) = 0")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--pmin", type=int, default=2)
    p.add_argument("--pmax", type=int, required=True, help="exclusive upper bound")
    p.add_argument("--out")

    p = sub.add_parser("fermat-mean", help="mean of q_p(a)/p over p <= pmax")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--pmax", type=int, required=True, help="inclusive upper bound")
    p.add_argument("--out")

    p = sub.add_parser("repro", help="re-run a named reference experiment")
    p.add_argument("target", nargs="?", help="target id; 'list' shows all")
    p.add_argument("--seed", type=int, default=12345)
    common(p)
    return ap


# ---------------------------------------------------------------------------
# commands


def _cmd_scan(args) -> int:
    from .scanner import ScanConfig, scan

    fld = args.field
    eta = parse_eta(args.eta, fld)
    chars = None
    if args.chars:
        chars = ("all",) if args.chars == "all" else tuple(c.strip() for c in args.chars.split(",") if c.strip())
    cfg = ScanConfig(fld, eta, args.pmax, args.pmin, chars, args.jobs or _jobs_default(), args.checkpoint)
    t0 = time.time()
    res = scan(cfg)
    recs = [h.to_dict() for h in res.hits]
    params = {"eta_high": list(reversed(cfg.eta)), "pmin": cfg.p_min, "pmax": cfg.p_max, "chars": list(cfg.chars)}
    args.field = fld.key
    _emit(args, recs, params, t0, res.summary())
    return 0


def _cmd_stats(args) -> int:
    from .montecarlo import run_stats

    pair = tuple(int(t) for t in args.pair.split(",")) if args.pair else None
    t0 = time.time()
    rep = run_stats(args.field, args.p, args.trials, args.seed, args.experiment, args.jobs or _jobs_default(), args.range, pair)
    args.field = args.field.key
    _emit(args, [rep.to_dict()], {"p": args.p, "trials": args.trials, "experiment": args.experiment}, t0)
    return 0


def _cmd_indep(args) -> int:
    from .montecarlo import coefficient_independence_probe

    t0 = time.time()
    rep = coefficient_independence_probe(args.field, args.p, args.trials, args.seed, args.constraints, args.jobs or _jobs_default())
    args.field = args.field.key
    _emit(args, [rep.to_dict()], {"p": args.p, "trials": args.trials, "constraints": args.constraints}, t0)
    return 0


def _cmd_extra(args) -> int:
    from .montecarlo import extra_divisibility_counts, extra_uniform_probability

    t0 = time.time()
    hits, n = extra_divisibility_counts(args.p, args.trials, args.seed, args.range[0], args.range[1], args.jobs or _jobs_default())
    rec = {"p": args.p, "trials": n, "hits": hits, "density": hits / n, "inv_p2": 1 / args.p**2, "uniform_model": extra_uniform_probability(args.p)}
    args.field = "d6"
    _emit(args, [rec], {"p": args.p, "trials": args.trials, "range": list(args.range)}, t0)
    return 0


def _cmd_phi(args) -> int:
    from .fermat_lab import factor_phi_tilde, phi_tilde

    t0 = time.time()
    res = factor_phi_tilde(args.a, args.m) if args.factor else phi_tilde(args.a, args.m)
    _emit(args, [res.to_dict()], {"a": str(args.a), "m": args.m, "factor": args.factor}, t0)
    return 0


def _cmd_fermat_scan(args) -> int:
    from .scanner import fermat_scan

    t0 = time.time()
    hits = fermat_scan(args.a, args.pmax, args.pmin)
    _emit(args, [{"a": str(args.a), "p": p} for p in hits], {"a": str(args.a), "pmin": args.pmin, "pmax": args.pmax}, t0)
    return 0


def _cmd_fermat_mean(args) -> int:
    from .fermat_lab import fermat_mean_scan

    t0 = time.time()
    res = fermat_mean_scan(args.a, args.pmax)
    _emit(args, [res.to_dict()], {"a": str(args.a), "pmax": args.pmax}, t0)
    return 0


def _cmd_repro(args) -> int:
    from .repro import REPRO, run_target

    if not args.target or args.target == "list":
        for k, t in REPRO.items():
            print(f"{k:18s} {t.anchor}")
        return 0 if args.target else 2
    if args.target not in REPRO:
        print(f"unknown target {args.target!r}; try 'repro list'", file=sys.stderr)
        return 2
    t0 = time.time()
    target = REPRO[args.target]
    out = run_target(target, seed=args.seed, jobs=args.jobs or _jobs_default())
    args.field = target.field
    _emit(args, out["records"], target.params, t0, out["check"], target.anchor)
    if not args.out:
        print(json.dumps(out["check"], sort_keys=True, default=str))
    return 0 if out["check"]["ok"] else 1


_COMMANDS = {
    "scan": _cmd_scan,
    "stats": _cmd_stats,
    "indep": _cmd_indep,
    "extra-div": _cmd_extra,
    "phi": _cmd_phi,
    "fermat-scan": _cmd_fermat_scan,
    "fermat-mean": _cmd_fermat_mean,
    "repro": _cmd_repro,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    if not argv:
        ap.print_usage(sys.stderr)
        return 2
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return int(exc.code or 0)
    if args.command is None:
        ap.print_usage(sys.stderr)
        return 2
    args.argv = argv
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, FieldError) as exc:
        print(f"thetareg {args.command}: error: {exc}", file=sys.stderr)
        return 2
