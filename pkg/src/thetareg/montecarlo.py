"""Fixed-p statistics over random eta.

Each experiment draws eta with coefficients uniform in [0, p^2), keeps the
draws that are units mod p (equivalently p does not divide the norm, as p
is unramified), computes alpha and counts vanishing events.

Vanishing of a p-adic character theta is read off the relation module: with
W_theta the theta-part of F_p[G], theta vanishes iff some nonzero c in
W_theta satisfies sum_nu c_nu alpha^nu = 0, i.e. iff the images of a basis
of W_theta have rank below dim W_theta.  ``regulator_report`` computes the
same flags from the regulator values; the test suite checks the two agree.

Randomness: trials are cut into chunks of CHUNK draws and chunk k uses a
Philox generator keyed by SeedSequence(seed, spawn_key=(k,)).  The counts
are sums over chunks, so they do not depend on the number of workers.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from itertools import combinations

import numpy as np

from .chars import (
    character_table,
    exact_rank_deficiency_probability,
    exact_vanish_probability,
    rank_deficiency_probability,
    theta_list,
)
from .fields import FieldSpec, d6_standard, parse_field
from .linalg import rref_mod_p

__all__ = [
    "CHUNK",
    "EXPERIMENTS",
    "StatReport",
    "BatchSample",
    "ThetaSetup",
    "theta_setup",
    "chunk_rng",
    "sample",
    "run_stats",
    "coefficient_independence_probe",
    "extra_divisibility_counts",
    "extra_uniform_probability",
]

CHUNK = 1 << 14
EXPERIMENTS = ("joint", "rank", "theta2", "delta2", "extra")


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _chunks(trials: int, chunk: int = CHUNK):
    k = 0
    while k * chunk < trials:
        yield k, min(chunk, trials - k * chunk)
        k += 1


def _pool_map(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(jobs) as pool:
            return pool.map(fn, tasks)
    return [fn(t) for t in tasks]


# ---------------------------------------------------------------------------
# theta projections


@dataclass
class ThetaSetup:
    field: FieldSpec
    p: int
    thetas: list
    bases: np.ndarray  # (T, kmax, n)
    dims: np.ndarray  # (T,)
    conj: np.ndarray  # (n, n, n) conjugation matrices mod p

    @property
    def labels(self) -> list[str]:
        return [t.label for t in self.thetas]


def theta_setup(fld: FieldSpec, p: int) -> ThetaSetup:
    from .regulators import _apply, _theta_operator

    fld.check_prime(p)
    n = fld.degree
    thetas = theta_list(fld.group.name, p)
    spans = []
    for th in thetas:
        op = _theta_operator(th, fld, p)
        imgs = [_apply(op, tuple(int(i == j) for j in range(n)), fld, p) for i in range(n)]
        red, piv = rref_mod_p(imgs, p)
        basis = red[: len(piv)]
        if len(basis) != th.f * th.degree * th.degree:
            raise AssertionError(f"theta part of {th.label} has dimension {len(basis)}")
        spans.append(basis)
    kmax = max(len(b) for b in spans)
    bases = np.zeros((len(thetas), kmax, n), dtype=np.int64)
    for t, b in enumerate(spans):
        bases[t, : len(b)] = b
    dims = np.array([len(b) for b in spans], dtype=np.int64)
    conj = np.array(fld.conj_matrices(p), dtype=np.int64)
    return ThetaSetup(fld, p, thetas, bases, dims, conj)


@dataclass
class BatchSample:
    """Per-draw data for one batch; rows of invalid draws are meaningless."""

    setup: ThetaSetup
    etas: np.ndarray
    alphas: np.ndarray
    valid: np.ndarray
    ranks: np.ndarray
    theta_ranks: np.ndarray

    @property
    def theta_vanish(self) -> np.ndarray:
        return self.theta_ranks < self.setup.dims[None, :]

    @property
    def theta_delta(self) -> np.ndarray:
        per = np.array([t.f * t.degree for t in self.setup.thetas], dtype=np.int64)
        return (self.setup.dims[None, :] - self.theta_ranks) // per[None, :]

    def char_vanish(self) -> dict[str, np.ndarray]:
        tv = self.theta_vanish
        out = {}
        for chi in character_table(self.setup.field.group.name):
            cols = [k for k, t in enumerate(self.setup.thetas) if t.chi == chi.name]
            out[chi.name] = tv[:, cols].any(axis=1)
        return out


def draw_etas(rng: np.random.Generator, size: int, n: int, p: int, coeff_range: tuple | None = None) -> np.ndarray:
    if coeff_range is None:
        return rng.integers(0, p * p, size=(size, n), dtype=np.int64)
    lo, hi = coeff_range
    return rng.integers(lo, hi, size=(size, n), dtype=np.int64)


def sample_etas(setup: ThetaSetup, etas: np.ndarray) -> BatchSample:
    from ._jit import MAX_P, batch_kernel

    if setup.p >= MAX_P:
        raise ValueError(f"batch statistics need p < {MAX_P}")
    fld = setup.field
    b, n = etas.shape
    alphas = np.zeros((b, n), dtype=np.int64)
    ranks = np.zeros(b, dtype=np.int64)
    tr = np.zeros((b, len(setup.thetas)), dtype=np.int64)
    valid = np.zeros(b, dtype=np.bool_)
    qlow = np.array(fld.q_low, dtype=np.int64)
    batch_kernel(np.ascontiguousarray(etas, dtype=np.int64), setup.p, qlow, setup.conj, setup.bases, setup.dims, alphas, ranks, tr, valid)
    return BatchSample(setup, etas, alphas, valid, ranks, tr)


def sample(fld: FieldSpec, p: int, trials: int, seed: int, coeff_range: tuple | None = None) -> BatchSample:
    """All per-draw data for ``trials`` draws (single process; for tests and probes)."""
    setup = theta_setup(fld, p)
    parts = [
        sample_etas(setup, draw_etas(chunk_rng(seed, k), size, fld.degree, p, coeff_range))
        for k, size in _chunks(trials)
    ]
    cat = lambda name: np.concatenate([getattr(s, name) for s in parts])  # noqa: E731
    return BatchSample(setup, cat("etas"), cat("alphas"), cat("valid"), cat("ranks"), cat("theta_ranks"))


# ---------------------------------------------------------------------------
# experiments


def _split_pair(setup: ThetaSetup, pair) -> list[int]:
    """Indices of the two thetas tested by the theta2 experiment.

    ``pair`` lists theta(s^-1) values; by default the least residue g of
    order d and g^2 (2 and 4 for p = 31).
    """
    p = setup.p
    split = [k for k, t in enumerate(setup.thetas) if t.r is not None and t.chi != "1"]
    if len(split) < 2:
        raise ValueError(f"the theta2 experiment needs a split character at p={p}")
    d = setup.field.degree
    if pair is None:
        g = next(r for r in range(2, p) if pow(r, d, p) == 1)
        pair = (g, g * g % p)
    want = [pow(int(v), -1, p) for v in pair]  # theta(s) = r for the resolvent S_r
    idx = []
    for r in want:
        hit = [k for k in split if setup.thetas[k].r == r]
        if not hit:
            raise ValueError(f"no theta with theta(s^-1) = {pow(r, -1, p)} at p={p}")
        idx.append(hit[0])
    return idx


def _count_chunk(args) -> dict:
    key, p, experiment, seed, k, size, coeff_range, extra = args
    fld = parse_field(key)
    setup = theta_setup(fld, p)
    s = sample_etas(setup, draw_etas(chunk_rng(seed, k), size, fld.degree, p, coeff_range))
    v = s.valid
    out = {"N0": int(v.sum())}
    if experiment == "joint":
        cv = s.char_vanish()
        names = [c.name for c in character_table(fld.group.name)]
        for r in range(1, len(names) + 1):
            for combo in combinations(names, r):
                m = v.copy()
                for c in combo:
                    m &= cv[c]
                out["&".join(combo)] = int(m.sum())
        tv = s.theta_vanish
        for t, th in enumerate(setup.thetas):
            if th.label != th.chi:
                out[th.label] = int((v & tv[:, t]).sum())
    elif experiment == "rank":
        out["rank<n"] = int((v & (s.ranks < fld.degree)).sum())
    elif experiment == "theta2":
        idx = extra
        tv = s.theta_vanish
        sel = v.copy()
        for t in range(len(setup.thetas)):
            sel &= tv[:, t] if t in idx else ~tv[:, t]
        out["theta2"] = int(sel.sum())
        for t in idx:
            out[setup.thetas[t].label] = int((v & tv[:, t]).sum())
    elif experiment == "delta2":
        cv = s.char_vanish()
        base = v & cv["chi2"] & ~cv["1"] & ~cv["chi1"]
        out["chi2_only"] = int(base.sum())
        out["delta2"] = int((base & (s.ranks == 2)).sum())
        t2 = [t for t, th in enumerate(setup.thetas) if th.chi == "chi2"][0]
        out["delta2_any"] = int((v & (s.theta_delta[:, t2] == 2)).sum())
    elif experiment == "indep":
        m = v.copy()
        for i, r in extra:
            m &= s.alphas[:, i] == r % p
        out["match"] = int(m.sum())
    else:
        raise ValueError(f"unknown experiment {experiment!r}")
    return out


def _sum_counts(parts: list[dict]) -> dict:
    tot: dict = {}
    for d in parts:
        for k, val in d.items():
            tot[k] = tot.get(k, 0) + val
    return tot


@dataclass
class StatReport:
    field: str
    p: int
    experiment: str
    trials: int
    seed: int
    n0: int
    counts: dict
    heuristic: dict  # key -> comparator from the 1/p^f heuristics
    exact: dict  # key -> probability for alpha uniform mod p
    params: dict = dc_field(default_factory=dict)

    @property
    def insufficient(self) -> bool:
        return self.n0 == 0

    def density(self, key: str) -> float | None:
        return None if self.n0 == 0 else self.counts[key] / self.n0

    def stderr(self, key: str) -> float | None:
        d = self.density(key)
        return None if d is None else math.sqrt(d * (1 - d) / self.n0)

    def sigma(self, key: str, q: float) -> float | None:
        """Binomial standard error under the comparator q."""
        return None if self.n0 == 0 else math.sqrt(q * (1 - q) / self.n0)

    def zscore(self, key: str, q: float) -> float | None:
        d, s = self.density(key), self.sigma(key, q)
        if d is None:
            return None
        return 0.0 if s == 0 else (d - q) / s

    def within(self, key: str, q: float, k: float = 3.0) -> bool:
        z = self.zscore(key, q)
        return z is not None and abs(z) <= k

    def to_dict(self) -> dict:
        d = asdict(self)
        d["insufficient"] = self.insufficient
        d["density"] = {k: self.density(k) for k in self.counts if k != "N0"}
        d["stderr"] = {k: self.stderr(k) for k in self.counts if k != "N0"}
        d["z_heuristic"] = {k: self.zscore(k, q) for k, q in self.heuristic.items()}
        d["z_exact"] = {k: self.zscore(k, q) for k, q in self.exact.items()}
        return d


def _theory(fld: FieldSpec, p: int, experiment: str, keys, extra) -> tuple[dict, dict]:
    thetas = theta_list(fld.group.name, p)
    pv = {t.label: exact_vanish_probability(t, p) for t in thetas}
    heur, exact = {}, {}
    if experiment == "joint":
        hc, ec = {}, {}
        for chi in character_table(fld.group.name):
            ts = [t for t in thetas if t.chi == chi.name]
            hc[chi.name] = sum(float(p) ** -t.f for t in ts)
            ec[chi.name] = 1.0 - math.prod(1.0 - pv[t.label] for t in ts)
        for k in keys:
            if k == "N0":
                continue
            if k in pv and k not in hc:
                th = next(t for t in thetas if t.label == k)
                heur[k] = float(p) ** -th.f
                exact[k] = pv[k]
                continue
            parts = k.split("&")
            heur[k] = math.prod(hc[c] for c in parts)
            exact[k] = math.prod(ec[c] for c in parts)
    elif experiment == "rank":
        heur["rank<n"] = rank_deficiency_probability(fld, p)
        exact["rank<n"] = exact_rank_deficiency_probability(fld, p)
    elif experiment == "theta2":
        idx = extra
        heur["theta2"] = 1.0 / p**2
        exact["theta2"] = math.prod(pv[t.label] if k in idx else 1 - pv[t.label] for k, t in enumerate(thetas))
        for k in idx:
            heur[thetas[k].label] = 1.0 / p
            exact[thetas[k].label] = pv[thetas[k].label]
    elif experiment == "delta2":
        one = (1 - 1 / p) ** 2  # trivial and sign characters nonvanishing
        c2 = next(t for t in thetas if t.chi == "chi2")
        heur["chi2_only"] = 1.0 / p
        exact["chi2_only"] = one * pv[c2.label]
        heur["delta2"] = 1.0 / p**4
        exact["delta2"] = one / p**4
        heur["delta2_any"] = 1.0 / p**4
        exact["delta2_any"] = 1.0 / p**4
    elif experiment == "indep":
        q = float(p) ** -len(extra)
        heur["match"] = exact["match"] = q
    return heur, exact


def _run_counts(fld: FieldSpec, p: int, experiment: str, trials: int, seed: int, jobs: int, coeff_range, extra) -> dict:
    fld.check_prime(p)
    tasks = [(fld.key, p, experiment, seed, k, size, coeff_range, extra) for k, size in _chunks(trials)]
    return _sum_counts(_pool_map(_count_chunk, tasks, jobs))


def run_stats(
    fld,
    p: int,
    trials: int,
    seed: int,
    experiment: str = "joint",
    jobs: int = 1,
    coeff_range: tuple | None = None,
    pair=None,
) -> StatReport:
    """Run one experiment at the prime p and compare with the theory.

    experiment: joint (per-character and joint vanishing), rank (rank < n),
    theta2 (exactly two given split thetas vanish), delta2 (D6: delta = 2
    for chi2 with the degree-1 characters nonvanishing), extra (p^2 divides
    the D6 chi2 regulator of a random integer element).
    """
    if isinstance(fld, str):
        fld = parse_field(fld)
    if trials < 1:
        raise ValueError("trials must be positive")
    if experiment == "extra":
        from .regulators import extra_divisibility_probe

        hits, n = extra_divisibility_probe(p, trials, seed, fld=fld, jobs=jobs)
        q = 1.0 / p**2
        return StatReport(
            fld.key, p, "extra", trials, seed, n, {"N0": n, "p2|Reg": hits},
            {"p2|Reg": q}, {"p2|Reg": extra_uniform_probability(p)}, {"coeff_range": [-200, 200]},
        )
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")
    if experiment == "delta2" and fld.group.name != "D6":
        raise ValueError("the delta2 experiment is for the D6 field")
    extra = None
    params: dict = {}
    if experiment == "theta2":
        extra = tuple(_split_pair(theta_setup(fld, p), pair))
        params["thetas"] = [theta_list(fld.group.name, p)[k].label for k in extra]
    if coeff_range is not None:
        params["coeff_range"] = list(coeff_range)
    counts = _run_counts(fld, p, experiment, trials, seed, jobs, coeff_range, extra)
    heur, exact = _theory(fld, p, experiment, counts.keys(), extra)
    return StatReport(fld.key, p, experiment, trials, seed, counts["N0"], counts, heur, exact, params)


def coefficient_independence_probe(fld, p: int, trials: int, seed: int, constraints, jobs: int = 1) -> StatReport:
    """Density of draws whose alpha has prescribed coordinates.

    constraints: (index, residue) pairs, index into the low-first coefficient
    vector of alpha (index 0 is the constant term).
    """
    if isinstance(fld, str):
        fld = parse_field(fld)
    cons = tuple((int(i), int(r) % p) for i, r in constraints)
    if len({i for i, _ in cons}) != len(cons) or any(not 0 <= i < fld.degree for i, _ in cons):
        raise ValueError("constraints need distinct coordinate indices in range")
    counts = _run_counts(fld, p, "indep", trials, seed, jobs, None, cons)
    heur, exact = _theory(fld, p, "indep", counts.keys(), cons)
    return StatReport(fld.key, p, "indep", trials, seed, counts["N0"], counts, heur, exact, {"constraints": [list(c) for c in cons]})


# ---------------------------------------------------------------------------
# extra divisibility


def extra_uniform_probability(p: int) -> float:
    """P(p^2 | det) for a uniform 2x2 matrix over Z_p: 1/p^2 + 1/p^3 - 1/p^5."""
    return 1.0 / p**2 + 1.0 / p**3 - 1.0 / p**5


def _extra_chunk(args) -> int:
    p, seed, k, size, lo, hi, key = args
    from ._jit import quad_form_zero
    from .regulators import CHI2_TERMS

    fld = parse_field(key)
    m = p * p
    conj = np.array(fld.conj_matrices(m), dtype=np.int64)
    elems = chunk_rng(seed, k).integers(lo, hi, size=(size, fld.degree), dtype=np.int64)
    hits = np.zeros(size, dtype=np.bool_)
    quad_form_zero(elems, conj, np.array(fld.q_low, dtype=np.int64), m, np.array(CHI2_TERMS, dtype=np.int64), hits)
    return int(hits.sum())


def extra_divisibility_counts(p: int, trials: int, seed: int, lo: int = -200, hi: int = 200, jobs: int = 1, fld: FieldSpec | None = None) -> tuple[int, int]:
    """(hits, trials) for p^2 | chi2-form over random integer elements of the D6 field.

    No norm filter is applied; E = 0 counts as a hit.
    """
    fld = fld or d6_standard()
    if fld.group.name != "D6":
        raise ValueError("extra divisibility is implemented for the D6 field")
    if p < 5 or fld.denominator_lcm % p == 0:
        raise ValueError(f"p={p} is not usable here")
    from ._jit import MAX_P

    if p * p >= MAX_P * MAX_P:
        raise ValueError("p too large for the compiled kernel")
    tasks = [(p, seed, k, size, lo, hi, fld.key) for k, size in _chunks(trials)]
    return sum(_pool_map(_extra_chunk, tasks, jobs)), trials
