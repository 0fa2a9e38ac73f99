"""Named reproduction targets for ``thetareg repro``.

Each target fixes a field, parameters and the expected outcome: an exact
hit set, exact values, or a density compared at 3 binomial standard
errors.  ``trials`` is the count used for the original run.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

__all__ = ["ReproTarget", "REPRO", "run_target"]


@dataclass
class ReproTarget:
    name: str
    anchor: str
    kind: str  # scan | fermat | stats | indep | extra | phi | mean | report
    field: str | None
    params: dict
    expected: dict = dc_field(default_factory=dict)
    slow: bool = False


def _t(name, anchor, kind, field, params, expected, slow=False):
    return name, ReproTarget(name, anchor, kind, field, params, expected, slow)


def _d6_rank(p, trials):
    return _t(
        f"d6-rank-{p}", f"D6 rank-deficiency density at p={p}", "stats", "d6",
        {"p": p, "trials": trials, "experiment": "rank"}, {"rank<n": 3 / p - 3 / p**2 + 1 / p**3},
    )


def _d6_joint(p):
    one, two, three = 1 / p, 1 / p**2, 1 / p**3
    return _t(
        f"d6-joint-{p}", f"D6 per-character and joint vanishing densities at p={p}", "stats", "d6",
        {"p": p, "trials": 1_000_000, "experiment": "joint"},
        {"1": one, "chi1": one, "chi2": one, "1&chi1": two, "1&chi2": two, "chi1&chi2": two, "1&chi1&chi2": three},
    )


REPRO: dict[str, ReproTarget] = dict(
    [
        _t("fermat-659", "Fermat quotient zeros of 659 below 10^5", "fermat", None,
           {"a": 659, "pmax": 100_000}, {"hits": [23, 131, 2221, 9161, 65983]}),
        _t("quad-eps6", "unit 5+2sqrt6, character chi, p < 10^3", "scan", "quad:6",
           {"eta": "2,5", "pmax": 1000}, {"hits": [7, 523], "suspected_trivial": ["1"]}),
        _t("quad-7", "7+2sqrt6, p < 10^4", "scan", "quad:6", {"eta": "2,7", "pmax": 10_000},
           {"hits": [11, 37, 163, 4219]}),
        _t("quad-123", "16+sqrt123, p < 10^3", "scan", "quad:123", {"eta": "1,16", "pmax": 1000}, {"hits": [5, 751]}),
        _t("quad-m1", "1+5sqrt-1, p < 10^3", "scan", "quad:-1", {"eta": "5,1", "pmax": 1000}, {"hits": [73]}),
        _t("c3-scan-41", "Shanks t=41, eta=3x^2-2x+6, p < 10^5, inert solution", "scan", "shanks:41",
           {"eta": "3,-2,6", "pmax": 100_000}, {"hits": [5]}),
        _t("c3-scan-17", "Shanks t=17, eta=3x^2-2x+6, p < 1.4*10^6", "scan", "shanks:17",
           {"eta": "3,-2,6", "pmax": 1_400_000}, {"hits": [1309963]}, slow=True),
        _t("c5-scan-1", "quintic field of conductor 11, eta=(-2,1,0,0,-3), p < 10^5", "scan", "quintic11",
           {"eta": "-2,1,0,0,-3", "pmax": 100_000}, {"hits": [31, 101, 39451]}),
        _t("c5-scan-2", "quintic field, eta=(10,-7,0,1,-2), p < 10^4", "scan", "quintic11",
           {"eta": "10,-7,0,1,-2", "pmax": 10_000}, {"hits": [7]}),
        _t("c5-kernel-79", "quintic field, eta=(10,-7,-3,1,-2) at p=79", "report", "quintic11",
           {"eta": "10,-7,-3,1,-2", "p": 79}, {"kernel_dim": 2}),
        _t("d6-scan-1", "D6, eta=x^5-3x^4-7x^2+x-1, chi2, p < 10^6", "scan", "d6",
           {"eta": "1,-3,0,-7,1,-1", "pmax": 1_000_000, "chars": ["chi2"]}, {"hits": [7, 13, 69677, 387161]}),
        _t("d6-trivial", "D6, eta=x^5-2x^4+4x^3-3x^2+x-1: chi1 trivially null", "scan", "d6",
           {"eta": "1,-2,4,-3,1,-1", "pmax": 2000, "chars": ["chi1"]}, {"suspected_trivial": ["chi1"]}),
        _t("d6-delta2", "D6, eta=3x^5-20x^4+15x^3+16x^2+9x+21 at p=7", "report", "d6",
           {"eta": "3,-20,15,16,9,21", "p": 7}, {"delta": {"chi2": 2}}),
        _t("c3-rank-43", "cyclic cubic t=11, rank density at p=43", "stats", "shanks:11",
           {"p": 43, "trials": 5_000_000, "experiment": "rank"}, {"rank<n": 0.068685}),
        _t("c3-rank-41", "cyclic cubic t=11, rank density at p=41", "stats", "shanks:11",
           {"p": 41, "trials": 5_000_000, "experiment": "rank"}, {"rank<n": 0.024970}),
        _t("c5-rank-7", "quintic rank density at p=7", "stats", "quintic11",
           {"p": 7, "trials": 500_000, "experiment": "rank"}, {"rank<n": 0.143214}),
        _t("c5-rank-19", "quintic rank density at p=19", "stats", "quintic11",
           {"p": 19, "trials": 500_000, "experiment": "rank"}, {"rank<n": 0.057880}),
        _t("c5-rank-31", "quintic rank density at p=31", "stats", "quintic11",
           {"p": 31, "trials": 500_000, "experiment": "rank"}, {"rank<n": 0.151214}),
        _t("c5-theta2-31", "quintic, exactly two split thetas vanish at p=31", "stats", "quintic11",
           {"p": 31, "trials": 1_000_000, "experiment": "theta2"}, {"theta2": 1 / 31**2}),
        _d6_rank(13, 50_000),
        _d6_rank(17, 50_000),
        _d6_rank(29, 50_000),
        _d6_rank(31, 50_000),
        _d6_rank(37, 50_000),
        _d6_joint(13),
        _d6_joint(37),
        _t("d6-delta2-13", "D6 delta=2 density at p=13", "stats", "d6",
           {"p": 13, "trials": 500_000, "experiment": "delta2"}, {"delta2": 1 / 13**4}),
        _t("d6-indep-17", "D6 coordinates (X1,X2,X5)=(4,4,1) at p=17", "indep", "d6",
           {"p": 17, "trials": 500_000, "constraints": [[0, 4], [1, 4], [4, 1]]}, {"match": 1 / 17**3}),
        _t("c3-indep-11", "cyclic cubic t=11, (X3,X2)=(4,1) at p=11", "indep", "shanks:11",
           {"p": 11, "trials": 500_000, "constraints": [[2, 4], [1, 1]]}, {"match": 1 / 11**2}),
        _t("extra-101", "extra p-divisibility of the D6 chi2 regulator, p=101", "extra", "d6",
           {"p": 101, "trials": 1_000_000}, {"p2|Reg": 1 / 101**2}),
        _t("extra-149", "extra p-divisibility of the D6 chi2 regulator, p=149", "extra", "d6",
           {"p": 149, "trials": 1_000_000}, {"p2|Reg": 1 / 149**2}),
        _t("phi-35-12", "Phi~_35(12) and its factorization", "phi", None, {"a": 12, "m": 35},
           {"phi_tilde": 72872404828019704577129461, "factors": [[71, 1], [491, 1], [806821, 1], [6089651, 1], [425455031, 1]]}),
        _t("phi-28-14", "Phi~_28(14) and the square of 29", "phi", None, {"a": 14, "m": 28},
           {"factors": [[29, 2], [3361, 1], [176597, 1]]}),
        _t("phi-prod-14", "repeated primes of Phi~_m(14), m <= 40", "phi-prod", None, {"a": 14, "m_max": 40},
           {"repeated": [29]}),
        _t("mean-839", "mean of q_p(839)/p for p <= 10^5", "mean", None, {"a": 839, "pmax": 100_000},
           {"range": [0.49, 0.51]}),
    ]
)


def _scan(t: ReproTarget, jobs: int) -> dict:
    from .cli import parse_eta
    from .fields import parse_field
    from .scanner import ScanConfig, scan

    fld = parse_field(t.field)
    chars = tuple(t.params["chars"]) if "chars" in t.params else None
    res = scan(ScanConfig(fld, parse_eta(t.params["eta"], fld), t.params["pmax"], chars=chars, jobs=jobs))
    summ = res.summary()
    ok = True
    got = {"hits": summ["hits"], "suspected_trivial": summ["suspected_trivial"]}
    for k, v in t.expected.items():
        ok &= got[k] == v
    ok &= all(all(h.lift) for h in res.hits)
    return {"records": [h.to_dict() for h in res.hits], "check": {"ok": ok, "expected": t.expected, "got": got}}


def _report(t: ReproTarget) -> dict:
    from .cli import parse_eta
    from .fields import parse_field
    from .regulators import regulator_report
    from .ring import alpha_of

    fld = parse_field(t.field)
    rep = regulator_report(alpha_of(parse_eta(t.params["eta"], fld), t.params["p"], fld))
    got = {"kernel_dim": len(rep.kernel), "delta": rep.delta}
    ok = True
    for k, v in t.expected.items():
        ok &= all(got[k].get(a) == b for a, b in v.items()) if isinstance(v, dict) else got[k] == v
    return {"records": [rep.to_dict()], "check": {"ok": ok, "expected": t.expected, "got": got}}


def _density_check(rep, expected: dict) -> dict:
    rows = {}
    ok = rep.n0 > 0
    for k, q in expected.items():
        z = rep.zscore(k, q)
        rows[k] = {"density": rep.density(k), "expected": q, "z": z, "exact": rep.exact.get(k)}
        ok &= z is not None and abs(z) <= 3
    return {"ok": ok, "rows": rows}


def run_target(t: ReproTarget, seed: int = 12345, jobs: int = 1, trials: int | None = None) -> dict:
    """Run a target; returns {"records": [...], "check": {"ok": bool, ...}}."""
    if t.kind == "scan":
        return _scan(t, jobs)
    if t.kind == "report":
        return _report(t)
    if t.kind == "fermat":
        from .scanner import fermat_scan

        hits = fermat_scan(t.params["a"], t.params["pmax"])
        return {"records": [{"p": p} for p in hits], "check": {"ok": hits == t.expected["hits"], "got": hits}}
    if t.kind in ("stats", "indep", "extra"):
        from .montecarlo import coefficient_independence_probe, run_stats

        n = trials or t.params["trials"]
        p = t.params["p"]
        if t.kind == "indep":
            rep = coefficient_independence_probe(t.field, p, n, seed, t.params["constraints"], jobs)
        else:
            rep = run_stats(t.field, p, n, seed, t.params.get("experiment", "extra"), jobs)
        return {"records": [rep.to_dict()], "check": _density_check(rep, t.expected)}
    if t.kind == "phi":
        from .fermat_lab import factor_phi_tilde

        res = factor_phi_tilde(t.params["a"], t.params["m"])
        got = {"phi_tilde": res.phi_tilde, "factors": [[int(q), e] for q, e in res.factors]}
        ok = all(got[k] == v for k, v in t.expected.items())
        return {"records": [res.to_dict()], "check": {"ok": ok, "expected": t.expected, "got": got}}
    if t.kind == "phi-prod":
        from .fermat_lab import repeated_primes

        rep = repeated_primes(t.params["a"], t.params["m_max"])
        got = sorted({q for qs in rep.values() for q in qs})
        return {"records": [{"m": m, "repeated": qs} for m, qs in rep.items()],
                "check": {"ok": got == t.expected["repeated"], "got": got}}
    if t.kind == "mean":
        from .fermat_lab import fermat_mean_scan

        res = fermat_mean_scan(t.params["a"], t.params["pmax"])
        lo, hi = t.expected["range"]
        ok = res.mean is not None and lo <= res.mean <= hi
        return {"records": [res.to_dict()], "check": {"ok": ok, "got": res.mean, "zeros": res.zeros}}
    raise ValueError(f"unknown target kind {t.kind!r}")
