"""Cyclotomic values and Fermat quotients of rationals.

For a = u/v and m >= 1 put Phi_m(u, v) = v^phi(m) Phi_m(u/v) and
Phi~_m(a) = Phi_m(u, v) / gcd(Phi_m(u, v), m).  A prime l not dividing m*u*v
divides Phi~_m(a) exactly when a has order m mod l, and l^2 divides it exactly
when moreover q_l(a) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from .primes import CompositeCofactor, factorize as _factorize, multiplicative_order, primes_in_range
from .regulators import fermat_quotient

__all__ = [
    "PhiFactorization",
    "MeanScan",
    "cyclotomic_poly",
    "poly_str",
    "phi_tilde",
    "phi_homogeneous",
    "phi_mod",
    "factorize",
    "factor_phi_tilde",
    "order_mod",
    "multiplicity",
    "square_law",
    "fermat_mean_scan",
    "repeated_primes",
]


def _ratio(a) -> tuple[int, int]:
    if isinstance(a, tuple):
        u, v = (int(t) for t in a)
        g = math.gcd(u, v)
        if v < 0:
            u, v = -u, -v
        return u // g, v // g
    fa = Fraction(a)
    return fa.numerator, fa.denominator


def _check_a(u: int, v: int) -> None:
    if v == 0:
        raise ValueError("denominator must be nonzero")
    if u == 0 or abs(u) == abs(v):
        raise ValueError("a must differ from 0, 1 and -1")


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Phi_m as integer coefficients, low degree first.

    Exact division of x^m - 1 by Phi_d for the proper divisors d of m.
    """
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num: list, den: tuple) -> list:
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]  # den is monic
        if c:
            q[k - dn] = c
            for i, di in enumerate(den):
                num[k - dn + i] -= c * di
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return q


def poly_str(coeffs) -> str:
    """Human form, highest degree first: x^2 - x + 1."""
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mag = abs(c)
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        body = str(mag) if (mag != 1 or k == 0) else ""
        body = body + mono if body and mono else (body or mono)
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, body in parts[1:]:
        s += f" {sg} {body}"
    return s


def phi_homogeneous(u: int, v: int, m: int) -> int:
    """v^phi(m) Phi_m(u/v)."""
    c = cyclotomic_poly(m)
    d = len(c) - 1
    return sum(ck * u**k * v ** (d - k) for k, ck in enumerate(c))


@dataclass
class PhiFactorization:
    a: Fraction
    m: int
    phi_tilde: int
    factors: list = dc_field(default_factory=list)  # (prime, multiplicity), ascending

    @property
    def complete(self) -> bool:
        return not any(isinstance(q, CompositeCofactor) for q, _ in self.factors)

    def product(self) -> int:
        return math.prod(q**e for q, e in self.factors)

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "m": self.m,
            "phi_tilde": str(self.phi_tilde),
            "factors": [[str(q), e] for q, e in self.factors],
            "complete": self.complete,
        }


def phi_tilde(a, m: int) -> PhiFactorization:
    """Phi~_m(a); the value only, factors left empty."""
    u, v = _ratio(a)
    _check_a(u, v)
    val = phi_homogeneous(u, v, m)
    g = math.gcd(val, m)
    return PhiFactorization(Fraction(u, v), m, val // g)


def factorize(n: int) -> list[tuple[int, int]]:
    """Complete factorization of n >= 1; unsplit composites are flagged, never hidden."""
    return _factorize(n)


def factor_phi_tilde(a, m: int) -> PhiFactorization:
    res = phi_tilde(a, m)
    n = res.phi_tilde
    if n == 0:
        raise ValueError("Phi~_m(a) vanishes")
    res.factors = factorize(abs(n))
    if res.product() != abs(n):
        raise ArithmeticError("factorization does not multiply back")
    return res


def order_mod(a, p: int) -> int:
    """Multiplicative order of a = u/v modulo the prime p."""
    u, v = _ratio(a)
    if u % p == 0 or v % p == 0:
        raise ValueError(f"p={p} divides the numerator or denominator")
    return multiplicative_order(u * pow(v, -1, p) % p, p)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _mobius(n: int) -> int:
    mu = 1
    for q, e in _factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def phi_mod(a, m: int, modulus: int) -> int | None:
    """Phi_m(u, v) mod ``modulus`` from the Moebius product of u^d - v^d.

    Avoids building Phi_m; returns None when a factor with exponent -1 is
    not invertible modulo ``modulus``.
    """
    u, v = _ratio(a)
    num, den = 1, 1
    for d in _divisors(m):
        mu = _mobius(m // d)
        if mu == 0:
            continue
        t = (pow(u, d, modulus) - pow(v, d, modulus)) % modulus
        if mu == 1:
            num = num * t % modulus
        else:
            den = den * t % modulus
    try:
        return num * pow(den, -1, modulus) % modulus
    except ValueError:
        return None


def multiplicity(a, p: int, m: int | None = None, cap: int = 3) -> int:
    """min(cap, v_p(Phi_m(u, v))) with m = order_mod(a, p) by default."""
    if m is None:
        m = order_mod(a, p)
    mod = p**cap
    val = phi_mod(a, m, mod)
    if val is None:
        raise ValueError("p also divides a lower cyclotomic value")
    k = 0
    while k < cap and val % p == 0:
        val //= p
        k += 1
    return k


def square_law(a, p: int) -> dict:
    """Both sides of the equivalence  l^2 | Phi~_m(a)  <=>  q_l(a) = 0."""
    m = order_mod(a, p)
    if m % p == 0:
        raise ValueError("p divides the order")
    mult = multiplicity(a, p, m)
    q = fermat_quotient(_ratio(a), p)
    return {"p": p, "m": m, "multiplicity": mult, "square": mult >= 2, "q": q, "q_zero": q == 0, "agree": (mult >= 2) == (q == 0)}


def repeated_primes(a, m_max: int) -> dict[int, list[int]]:
    """Primes of multiplicity >= 2 in Phi~_m(a), for m = 1 .. m_max."""
    out = {}
    for m in range(1, m_max + 1):
        f = factor_phi_tilde(a, m)
        rep = [int(q) for q, e in f.factors if e >= 2]
        if rep:
            out[m] = rep
    return out


@dataclass
class MeanScan:
    a: Fraction
    p_max: int
    n: int  # primes used
    n0: int  # primes with q_p(a) = 0
    mean: float | None  # mean of q_p(a) / p
    zeros: list
    histogram: list  # counts of q_p(a) / p in deciles

    @property
    def undefined(self) -> bool:
        return self.n == 0

    def to_dict(self) -> dict:
        return {
            "a": str(self.a), "p_max": self.p_max, "N": self.n, "N0": self.n0,
            "M": self.mean, "zeros": self.zeros, "histogram": self.histogram, "undefined": self.undefined,
        }


def fermat_mean_scan(a, p_max: int) -> MeanScan:
    """Running statistics of q_p(a)/p over the primes p <= p_max prime to a."""
    u, v = _ratio(a)
    _check_a(u, v)
    n = n0 = 0
    total = 0.0
    zeros = []
    hist = [0] * 10
    for p in primes_in_range(2, p_max + 1):
        p = int(p)
        if u % p == 0 or v % p == 0:
            continue
        q = fermat_quotient((u, v), p)
        n += 1
        total += q / p
        hist[min(9, 10 * q // p)] += 1
        if q == 0:
            n0 += 1
            zeros.append(p)
    return MeanScan(Fraction(u, v), p_max, n, n0, total / n if n else None, zeros, hist)
