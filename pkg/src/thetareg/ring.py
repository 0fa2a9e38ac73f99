"""Arithmetic in (Z/MZ)[x]/(Q) and the Fermat-quotient element alpha.

Coefficient vectors are stored low degree first: ``coeffs[k]`` is the
coefficient of x**k.  Everything here works on plain Python integers, so
any modulus is exact; the vectorised and compiled paths in ``_batch`` and
``_jit`` are tested against these functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .fields import FieldSpec

__all__ = [
    "RingElement",
    "AlphaData",
    "BadPrime",
    "ring_mul",
    "ring_pow",
    "ring_add",
    "ring_scale",
    "poly_mulmod",
    "alpha_of",
    "alpha_from_row",
]


class BadPrime(ValueError):
    """Raised when p lies in the skip set of a field/element pair."""

    def __init__(self, p: int, reason: str):
        super().__init__(f"p={p}: {reason}")
        self.p = p
        self.reason = reason


def poly_mulmod(a: Sequence[int], b: Sequence[int], q_low: Sequence[int], m: int | None) -> list[int]:
    """Product of two length-n vectors reduced by the monic Q.

    ``q_low`` holds the n low coefficients of Q (the leading 1 implicit).
    When ``m`` is None the product is computed over Z.
    """
    n = len(q_low)
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            if m is not None:
                c %= m
            base = k - n
            for i in range(n):
                prod[base + i] -= c * q_low[i]
    if m is None:
        return prod[:n]
    return [c % m for c in prod[:n]]


@dataclass(frozen=True)
class RingElement:
    """Element of (Z/MZ)[x]/(Q) for the defining polynomial of ``field``."""

    coeffs: tuple
    modulus: int
    field: "FieldSpec"

    def __post_init__(self):
        n = self.field.degree
        c = tuple(int(v) % self.modulus for v in self.coeffs)
        if len(c) > n:
            raise ValueError(f"expected at most {n} coefficients, got {len(c)}")
        c = c + (0,) * (n - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def one(cls, field, modulus):
        return cls((1,), modulus, field)

    @classmethod
    def from_high(cls, coeffs_high, modulus, field):
        """Build from coefficients listed highest degree first."""
        return cls(tuple(reversed([int(c) for c in coeffs_high])), modulus, field)

    def reduce(self, modulus: int) -> "RingElement":
        if self.modulus % modulus:
            raise ValueError("can only reduce to a divisor of the modulus")
        return RingElement(self.coeffs, modulus, self.field)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other):
        return ring_mul(self, other)

    def __add__(self, other):
        return ring_add(self, other)

    def __pow__(self, e):
        return ring_pow(self, e)


def _check(a: RingElement, b: RingElement) -> None:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    if a.field.key != b.field.key:
        raise ValueError(f"field mismatch: {a.field.key} vs {b.field.key}")


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _check(a, b)
    return RingElement(tuple(poly_mulmod(a.coeffs, b.coeffs, a.field.q_low, a.modulus)), a.modulus, a.field)


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _check(a, b)
    return RingElement(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.modulus, a.field)


def ring_scale(a: RingElement, k: int) -> RingElement:
    return RingElement(tuple(k * x for x in a.coeffs), a.modulus, a.field)


def ring_pow(a: RingElement, e: int) -> RingElement:
    """a**e by left-to-right square and multiply."""
    e = int(e)
    if e < 0:
        raise ValueError("negative exponent")
    q, m = a.field.q_low, a.modulus
    res = [1] + [0] * (a.field.degree - 1)
    base = list(a.coeffs)
    for bit in bin(e)[2:]:
        res = poly_mulmod(res, res, q, m)
        if bit == "1":
            res = poly_mulmod(res, base, q, m)
    return RingElement(tuple(res), m, a.field)


@dataclass(frozen=True)
class AlphaData:
    """alpha_p(eta) with its conjugates.

    ``rows[nu]`` is the coefficient vector (low degree first) of alpha^nu, in
    the group-element order of ``field.group``.
    """

    p: int
    rows: tuple
    field: "FieldSpec"

    @property
    def alpha(self) -> tuple:
        return self.rows[0]

    @property
    def n(self) -> int:
        return len(self.rows)

    def element(self, nu: int = 0) -> RingElement:
        return RingElement(self.rows[nu], self.p, self.field)

    def high_rows(self) -> list[list[int]]:
        """Rows highest degree first, the usual tabular layout."""
        return [list(reversed(r)) for r in self.rows]


def alpha_from_row(row: Sequence[int], p: int, field: "FieldSpec") -> AlphaData:
    """Attach the conjugate rows to a given alpha vector."""
    row = [int(v) % p for v in row]
    mats = field.conj_matrices(p)
    rows = []
    for C in mats:
        rows.append(tuple(sum(C[i][k] * row[k] for k in range(len(row))) % p for i in range(len(row))))
    return AlphaData(p, tuple(rows), field)


def eta_power(eta: RingElement, p: int) -> RingElement:
    """eta**(p**n - 1) mod p**2 (the element written eta_1 in lift checks)."""
    return ring_pow(eta, p ** eta.field.degree - 1)


def alpha_of(eta, p: int, field: "FieldSpec | None" = None) -> AlphaData:
    """Compute alpha = (eta**(p**n-1) - 1)/p mod p together with its conjugates.

    ``eta`` is a RingElement over a modulus divisible by p**2, or a sequence
    of integer coefficients (low degree first) together with ``field``.
    """
    if isinstance(eta, RingElement):
        field = field or eta.field
        if eta.modulus % (p * p):
            raise ValueError("eta must be given modulo a multiple of p^2")
        coeffs = eta.coeffs
    else:
        if field is None:
            raise ValueError("a field is required for a bare coefficient vector")
        coeffs = tuple(int(c) for c in eta)
    field.check_prime(p)
    p2 = p * p
    z = eta_power(RingElement(coeffs, p2, field), p).coeffs
    if z[0] % p != 1 or any(c % p for c in z[1:]):
        raise BadPrime(p, "eta is not a unit mod p (p divides its norm)")
    row = [(z[0] - 1) // p] + [c // p for c in z[1:]]
    return alpha_from_row(row, p, field)
