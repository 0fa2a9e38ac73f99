"""Prime scans: find the primes p at which a regulator of a fixed eta vanishes.

The range is cut into fixed blocks of integers (2**16 by default).  Each
block is processed independently: the compiled kernel computes alpha and
the rank of its conjugate matrix for every prime; a full RegulatorReport
is built only where the rank drops, since a regulator can vanish only
there.  A checkpoint journal records finished blocks, so an interrupted
scan resumes with identical output.
"""
from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .chars import character_table, splitting
from .fields import FieldSpec, parse_field
from .primes import primes_in_range
from .regulators import RegulatorReport, lift_check, regulator_report
from .ring import BadPrime, RingElement, alpha_from_row, alpha_of, eta_power

__all__ = ["ScanConfig", "ScanHit", "ScanResult", "scan", "suspected_trivial", "fermat_scan", "default_jobs", "BLOCK"]

BLOCK = 1 << 16
JOBS_ENV = "THETAREG_JOBS"


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class ScanConfig:
    field: FieldSpec
    eta: tuple  # integer coefficients, low degree first
    p_max: int  # exclusive
    p_min: int = 5
    chars: tuple | None = None  # None: every nontrivial character
    jobs: int = 1
    checkpoint: str | None = None
    block: int = BLOCK

    def __post_init__(self):
        if self.p_min < 5:
            self.p_min = 5
        if self.p_max < self.p_min:
            raise ValueError("p_max must be at least p_min")
        names = [c.name for c in character_table(self.field.group.name)]
        if self.chars is None:
            self.chars = tuple(n for n in names if n != "1")
        elif self.chars == ("all",):
            self.chars = tuple(names)
        bad = [c for c in self.chars if c not in names]
        if bad:
            raise ValueError(f"unknown characters {bad} for {self.field.key}; expected {names}")
        self.eta = tuple(int(c) for c in self.eta) + (0,) * (self.field.degree - len(self.eta))
        if not any(self.eta):
            raise ValueError("eta must be nonzero")

    def digest(self) -> str:
        blob = json.dumps(
            [self.field.key, list(self.eta), self.p_min, self.p_max, list(self.chars), self.block],
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class ScanHit:
    p: int
    chars: list  # selected characters that vanish at p
    splitting: dict  # chi -> [f, h]
    report: RegulatorReport
    alpha_rows: list  # low degree first
    lift: list  # lift_check result per kernel vector

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "char": list(self.chars),
            "residues": dict(self.report.residues),
            "kernel": [list(c) for c in self.report.kernel],
            # printed highest degree first, like the eta input
            "alpha_rows": [list(reversed(r)) for r in self.alpha_rows],
            "delta": dict(self.report.delta),
            "split_vanish": dict(self.report.split_vanish),
            "vanish": dict(self.report.vanish),
            "splitting": dict(self.splitting),
            "lift": list(self.lift),
        }

    @classmethod
    def from_dict(cls, d: dict, field_key: str) -> "ScanHit":
        rep = RegulatorReport(
            d["p"], field_key, d["residues"], d["vanish"], {}, d.get("split_vanish", {}),
            [tuple(c) for c in d["kernel"]], d["delta"], {}, 0,
        )
        rows = [list(reversed(r)) for r in d["alpha_rows"]]
        return cls(d["p"], d["char"], d["splitting"], rep, rows, d["lift"])


@dataclass
class ScanResult:
    config: ScanConfig
    hits: list
    tested: int = 0  # primes for which alpha was computed
    skipped: dict = dc_field(default_factory=dict)  # reason -> count
    vanish_counts: dict = dc_field(default_factory=dict)  # chi -> count over tested primes
    blocks: int = 0
    resumed_blocks: int = 0

    def summary(self) -> dict:
        return {
            "tested": self.tested,
            "skipped": dict(self.skipped),
            "vanish_counts": dict(self.vanish_counts),
            "hits": [h.p for h in self.hits],
            "blocks": self.blocks,
            "resumed_blocks": self.resumed_blocks,
            "suspected_trivial": suspected_trivial(self),
        }


def _block_ranges(cfg: ScanConfig) -> list[tuple[int, int, int]]:
    first = cfg.p_min // cfg.block
    last = (cfg.p_max - 1) // cfg.block
    out = []
    for b in range(first, last + 1):
        lo = max(cfg.p_min, b * cfg.block)
        hi = min(cfg.p_max, (b + 1) * cfg.block)
        if lo < hi:
            out.append((b, lo, hi))
    return out


def _make_hit(cfg: ScanConfig, alpha, eta1=None) -> tuple[ScanHit | None, list]:
    rep = regulator_report(alpha)
    vanishing = rep.vanishing
    sel = [c for c in cfg.chars if rep.vanish.get(c)]
    if not sel:
        return None, vanishing
    p = alpha.p
    fld = cfg.field
    if eta1 is None:
        eta1 = eta_power(RingElement(cfg.eta, p * p, fld), p)
    lifts = [lift_check(cfg.eta, p, c, fld, eta1=eta1) for c in rep.kernel]
    spl = {}
    for chi in character_table(fld.group.name):
        sd = splitting(chi, p)
        spl[chi.name] = [sd.f, sd.h]
    return ScanHit(p, sel, spl, rep, [list(r) for r in alpha.rows], lifts), vanishing


def process_block(cfg: ScanConfig, lo: int, hi: int) -> dict:
    """Scan primes in [lo, hi); returns a JSON-ready block record."""
    from ._jit import MAX_P, fields_arrays, scan_kernel

    fld = cfg.field
    skipped: Counter = Counter()
    vanish: Counter = Counter()
    hits = []
    tested = 0
    primes = [int(p) for p in primes_in_range(lo, hi)]
    good = []
    for p in primes:
        why = fld.skip_reason(p)
        if why:
            skipped[why] += 1
        else:
            good.append(p)
    fast = np.array([p for p in good if p < MAX_P], dtype=np.int64)
    slow = [p for p in good if p >= MAX_P]
    if fast.size:
        qlow, num, den = fields_arrays(fld)
        n = fld.degree
        alphas = np.zeros((fast.size, n), dtype=np.int64)
        ranks = np.zeros(fast.size, dtype=np.int64)
        status = np.zeros(fast.size, dtype=np.int64)
        scan_kernel(fast, np.array(cfg.eta, dtype=np.int64), qlow, num, den, alphas, ranks, status)
        for k in range(fast.size):
            p = int(fast[k])
            if status[k] == 1:
                skipped["p divides the norm of eta"] += 1
                continue
            if status[k] == 2:
                skipped["p divides a conjugation denominator"] += 1
                continue
            tested += 1
            if ranks[k] < n:
                alpha = alpha_from_row([int(v) for v in alphas[k]], p, fld)
                hit, vanishing = _make_hit(cfg, alpha)
                vanish.update(vanishing)
                if hit is not None:
                    hits.append(hit.to_dict())
    for p in slow:
        p2 = p * p
        eta1 = eta_power(RingElement(cfg.eta, p2, fld), p)
        try:
            alpha = alpha_of(cfg.eta, p, fld)
        except BadPrime:
            skipped["p divides the norm of eta"] += 1
            continue
        tested += 1
        hit, vanishing = _make_hit(cfg, alpha, eta1)
        vanish.update(vanishing)
        if hit is not None:
            hits.append(hit.to_dict())
    return {"hits": hits, "tested": tested, "skipped": dict(skipped), "vanish": dict(vanish)}


def _worker(args):
    cfg, b, lo, hi = args
    return b, process_block(cfg, lo, hi)


def _load_checkpoint(path: str, digest: str) -> dict:
    if not path or not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if data.get("digest") != digest:
        raise ValueError(f"checkpoint {path} belongs to a different scan configuration")
    return {int(k): v for k, v in data.get("blocks", {}).items()}


def _save_checkpoint(path: str, digest: str, done: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"digest": digest, "blocks": {str(k): v for k, v in sorted(done.items())}}, fh)
    os.replace(tmp, path)


def scan(cfg: ScanConfig) -> ScanResult:
    """Run the scan; hits come back sorted by p whatever the worker count."""
    ranges = _block_ranges(cfg)
    digest = cfg.digest()
    done = _load_checkpoint(cfg.checkpoint, digest) if cfg.checkpoint else {}
    resumed = sum(1 for b, _, _ in ranges if b in done)
    todo = [(cfg, b, lo, hi) for b, lo, hi in ranges if b not in done]

    def record(b, rec):
        done[b] = rec
        if cfg.checkpoint:
            _save_checkpoint(cfg.checkpoint, digest, done)

    if cfg.jobs > 1 and len(todo) > 1:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(cfg.jobs) as pool:
            for b, rec in pool.imap_unordered(_worker, todo):
                record(b, rec)
    else:
        for args in todo:
            b, rec = _worker(args)
            record(b, rec)

    res = ScanResult(cfg, [], blocks=len(ranges), resumed_blocks=resumed)
    skipped: Counter = Counter()
    vanish: Counter = Counter()
    for b, _, _ in ranges:
        rec = done[b]
        res.tested += rec["tested"]
        skipped.update(rec["skipped"])
        vanish.update(rec["vanish"])
        res.hits.extend(ScanHit.from_dict(h, cfg.field.key) for h in rec["hits"])
    res.hits.sort(key=lambda h: h.p)
    res.skipped = dict(sorted(skipped.items()))
    res.vanish_counts = {c.name: vanish.get(c.name, 0) for c in character_table(cfg.field.group.name)}
    return res


def suspected_trivial(result: ScanResult, min_primes: int = 25) -> list[str]:
    """Characters whose regulator vanished at every tested prime."""
    if result.tested < min_primes:
        return []
    return [c for c, k in result.vanish_counts.items() if k == result.tested]


def fermat_scan(a, p_max: int, p_min: int = 2) -> list[int]:
    """Primes p < p_max, p not dividing a, with q_p(a) = 0 (Wieferich-type primes)."""
    from fractions import Fraction

    fa = Fraction(a)
    u, v = fa.numerator, fa.denominator
    out = []
    for p in primes_in_range(max(p_min, 2), p_max):
        p = int(p)
        if u % p == 0 or v % p == 0:
            continue
        p2 = p * p
        x = pow(u, p - 1, p2) * pow(v, 1 - p, p2) % p2
        if x == 1:
            out.append(p)
    return out
