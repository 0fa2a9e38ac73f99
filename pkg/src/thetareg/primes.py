"""Primality, prime ranges and integer factorization.

Primality is deterministic Miller-Rabin below 2**64 (the witness set of
Jaeschke/Sinclair) and a strong-probable-prime test with a fixed set of
prime witnesses above that bound.  Factorization is trial division up to
10**6 followed by Brent's variant of Pollard rho.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "is_prime",
    "primes_below",
    "primes_in_range",
    "next_prime",
    "factorize",
    "CompositeCofactor",
    "multiplicative_order",
    "TRIAL_BOUND",
    "roots_of_unity",
]

TRIAL_BOUND = 10**6

_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# Seven bases that certify every n < 2**64.
_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_BASES_BIG = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Return True if ``n`` is prime (proven for n < 2**64)."""
    n = int(n)
    if n < 2:
        return False
    for q in _SMALL:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _BASES_64 if n < (1 << 64) else _BASES_BIG
    for a in bases:
        a %= n
        if a == 0:
            continue
        if not _strong_probable_prime(n, a, d, s):
            return False
    return True


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(limit - 1) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.nonzero(flags)[0]


def primes_below(limit: int) -> np.ndarray:
    """All primes p < limit as an int64 array."""
    if limit <= 2:
        return np.zeros(0, dtype=np.int64)
    return _sieve(int(limit)).astype(np.int64)


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """Primes p with lo <= p < hi, by a segmented sieve."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    base = primes_below(math.isqrt(hi - 1) + 1)
    flags = np.ones(hi - lo, dtype=bool)
    for q in base:
        q = int(q)
        start = max(q * q, (lo + q - 1) // q * q)
        if start >= hi:
            continue
        flags[start - lo :: q] = False
    return np.nonzero(flags)[0].astype(np.int64) + lo


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n = int(n) + 1
    if n <= 2:
        return 2
    if n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 2
    return n


class CompositeCofactor(int):
    """A composite factor that the factorization budget could not split."""

    def __repr__(self) -> str:
        return f"CompositeCofactor({int(self)})"


def _brent(n: int, c: int, budget: int) -> int | None:
    # Brent's cycle finding with batched gcds; returns a proper factor or None.
    y, r, q = 2, 1, 1
    g = 1
    m = 128
    steps = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > budget:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n: int, budget: int, out: dict, leftovers: list) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, budget, out, leftovers)
        _split(r, budget, out, leftovers)
        return
    for c in range(1, 21):
        g = _brent(n, c, budget)
        if g is not None and 1 < g < n:
            _split(g, budget, out, leftovers)
            _split(n // g, budget, out, leftovers)
            return
    leftovers.append(n)


def factorize(n: int, budget: int = 5_000_000) -> list[tuple[int, int]]:
    """Factor ``n >= 1`` into ascending (prime, multiplicity) pairs.

    A composite that survives rho within ``budget`` iterations per attempt
    is returned as a ``CompositeCofactor`` entry rather than being reported
    as prime.
    """
    n = int(n)
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for q in primes_below(TRIAL_BOUND):
        q = int(q)
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
    leftovers: list[int] = []
    if n > 1:
        if n < TRIAL_BOUND * TRIAL_BOUND:
            # no prime factor below the trial bound, so n is prime
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, budget, out, leftovers)
    res = sorted(out.items())
    for c in sorted(set(leftovers)):
        res.append((CompositeCofactor(c), leftovers.count(c)))
    return res


def _order_from_factors(a: int, p: int, group_order: int, factors) -> int:
    m = group_order
    for q, _ in factors:
        while m % q == 0 and pow(a, m // q, p) == 1:
            m //= q
    return m


def multiplicative_order(a: int, p: int) -> int:
    """Order of a in (Z/pZ)^*, for p prime not dividing a."""
    a %= p
    if a == 0:
        raise ValueError("a must be a unit mod p")
    return _order_from_factors(a, p, p - 1, factorize(p - 1))


def roots_of_unity(d: int, p: int) -> list[int]:
    """The residues of exact order d mod p, ascending (needs d | p - 1)."""
    if (p - 1) % d:
        raise ValueError(f"{d} does not divide p - 1 = {p - 1}")
    if d == 1:
        return [1]
    qs = [q for q, _ in factorize(d)]
    e = (p - 1) // d
    for x in range(2, p):
        y = pow(x, e, p)
        # y has order d iff y^(d/q) != 1 for every prime q | d
        if all(pow(y, d // q, p) != 1 for q in qs):
            return sorted(pow(y, k, p) for k in range(1, d + 1) if math.gcd(k, d) == 1)
    raise ArithmeticError("no element of the requested order")
