"""Catalogue of the supported Galois fields.

Four kinds are available: real or imaginary quadratic fields Q(sqrt m),
the Shanks simplest cubics, the real quintic subfield of Q(mu_11), and a
sextic D6 field (x = 2**(1/3) + j).  Each field carries exact rational
conjugation maps: ``conj_maps[nu]`` is x^nu written as a polynomial in x.

Conventions.  Conjugation of an element is substitution,
``conjugate(e, nu) = e(x^nu)``, and the group law is chosen so that
conjugating by nu and then by mu is conjugating by mu*nu.  The D6 elements
are ordered (1, s, s^2, t, ts, ts^2) with s t = t s^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ring import BadPrime, RingElement, poly_mulmod

__all__ = [
    "Group",
    "FieldSpec",
    "make_field",
    "parse_field",
    "quadratic",
    "shanks_cubic",
    "quintic_mu11",
    "d6_standard",
    "conjugate",
    "norm",
    "bareiss_det",
    "FieldError",
]


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class Group:
    """A finite group given by its multiplication table on indices 0..n-1."""

    name: str
    labels: tuple
    table: tuple

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.table[i].index(0)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def cyclic_group(n: int) -> Group:
    labels = tuple("1" if k == 0 else ("s" if k == 1 else f"s{k}") for k in range(n))
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return Group(f"C{n}", labels, table)


def _d6_table() -> tuple:
    # element t^a s^b is stored at index 3a+b; s t = t s^2 (= t s^-1)
    def mul(i, j):
        a1, b1 = divmod(i, 3)
        a2, b2 = divmod(j, 3)
        b = (b1 * (1 if a2 == 0 else -1) + b2) % 3
        return 3 * ((a1 + a2) % 2) + b

    return tuple(tuple(mul(i, j) for j in range(6)) for i in range(6))


D6_GROUP = Group("D6", ("1", "s", "s2", "t", "ts", "ts2"), _d6_table())


def bareiss_det(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(map(int, r)) for r in mat]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _poly_eval(poly: Sequence, arg: Sequence, q_low, m=None) -> list:
    """poly(arg) mod Q by Horner's rule (coefficients low degree first)."""
    n = len(q_low)
    acc = [0] * n
    for c in reversed(poly):
        acc = poly_mulmod(acc, arg, q_low, m)
        acc[0] += c
        if m is not None:
            acc[0] %= m
    return acc


def _primitive(vec: Sequence[Fraction]) -> tuple:
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        raise FieldError("zero direction vector")
    return tuple(v // g for v in ints)


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A Galois number field K = Q[x]/(Q) with explicit automorphisms."""

    key: str
    kind: str
    param: int | None
    poly: tuple  # Q, low degree first, monic (length n+1)
    group: Group
    conj_maps: tuple  # per group element, Fractions low degree first
    disc: int
    denominator_lcm: int
    sign: tuple | None  # values of the quadratic (sign) character, if any
    sqrt_vec: tuple | None  # primitive integer vector on the sqrt(m) line
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def q_low(self) -> tuple:
        return self.poly[:-1]

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.key == self.key

    # -- reductions -----------------------------------------------------
    def map_mod(self, nu: int, m: int) -> tuple:
        """Conjugation map nu with coefficients reduced mod m."""
        if math.gcd(m, self.denominator_lcm) != 1:
            raise BadPrime(m, "modulus shares a factor with the conjugation denominators")
        return tuple((c.numerator * pow(c.denominator, -1, m)) % m for c in self.conj_maps[nu])

    def conj_matrices(self, m: int) -> tuple:
        """Matrices C_nu over Z/m with C_nu[i][k] = coeff of x^i in (x^nu)^k."""
        got = self._cache.get(("conj", m))
        if got is not None:
            return got
        n = self.degree
        mats = []
        for nu in range(n):
            s = list(self.map_mod(nu, m))
            cols = []
            cur = [1 % m] + [0] * (n - 1)
            for _ in range(n):
                cols.append(cur)
                cur = poly_mulmod(cur, s, self.q_low, m)
            mats.append(tuple(tuple(cols[k][i] for k in range(n)) for i in range(n)))
        mats = tuple(mats)
        self._cache[("conj", m)] = mats
        return mats

    def skip_reason(self, p: int) -> str | None:
        if p <= 3:
            return "p <= 3"
        if self.degree % p == 0:
            return "p divides the degree"
        if self.disc % p == 0:
            return "p divides the discriminant"
        if self.denominator_lcm % p == 0:
            return "p divides a conjugation denominator"
        return None

    def check_prime(self, p: int) -> None:
        why = self.skip_reason(p)
        if why:
            raise BadPrime(p, why)

    def element(self, coeffs_high: Sequence[int]) -> tuple:
        """Integer coefficient vector (low first) from a high-first listing."""
        c = [int(v) for v in coeffs_high]
        if len(c) > self.degree:
            raise FieldError(f"at most {self.degree} coefficients expected")
        return tuple(reversed(c)) + (0,) * (self.degree - len(c))

    def ring(self, coeffs_low: Sequence[int], m: int) -> RingElement:
        return RingElement(tuple(coeffs_low), m, self)


def _build(key, kind, param, poly, group, maps, sign=None) -> FieldSpec:
    n = len(poly) - 1
    q_low = tuple(poly[:-1])
    if poly[-1] != 1:
        raise FieldError("defining polynomial must be monic")
    maps = tuple(tuple(Fraction(c) for c in mp) + (Fraction(0),) * (n - len(mp)) for mp in maps)
    if len(maps) != group.order or group.order != n:
        raise FieldError("need one conjugation map per group element")
    # each map must be a root of Q
    for nu, s in enumerate(maps):
        val = _poly_eval(poly, s, q_low)
        if any(val):
            raise FieldError(f"{key}: map {group.labels[nu]} is not a root of Q")
    # composition: conjugating by i then by j is conjugating by j*i, which
    # as substitution maps reads s_{i*j} = s_j(s_i(x))
    for i in range(n):
        for j in range(n):
            comp = tuple(_poly_eval(maps[j], maps[i], q_low))
            if comp != maps[group.mul(i, j)]:
                raise FieldError(f"{key}: maps do not realise the {group.name} table at ({i},{j})")
    den = 1
    for s in maps:
        for c in s:
            den = den * c.denominator // math.gcd(den, c.denominator)
    dq = [k * poly[k] for k in range(1, n + 1)]
    disc = (-1) ** (n * (n - 1) // 2) * norm_int(dq, poly)
    sqrt_vec = None
    if sign is not None:
        alt = [sum(sign[nu] * maps[nu][i] for nu in range(n)) for i in range(n)]
        sqrt_vec = _primitive(alt)
    return FieldSpec(key, kind, param, tuple(poly), group, maps, disc, den, sign, sqrt_vec)


def norm_int(coeffs_low: Sequence[int], poly: Sequence[int]) -> int:
    """Norm of an integer element: determinant of multiplication by it."""
    n = len(poly) - 1
    q_low = tuple(poly[:-1])
    e = list(coeffs_low) + [0] * (n - len(coeffs_low))
    cols = []
    cur = e
    for _ in range(n):
        cols.append(cur)
        cur = poly_mulmod(cur, [0, 1] + [0] * (n - 2) if n > 1 else [0], q_low, None)
    mat = [[cols[k][i] for k in range(n)] for i in range(n)]
    return bareiss_det(mat)


def _squarefree(m: int) -> bool:
    m = abs(m)
    q = 2
    while q * q <= m:
        if m % (q * q) == 0:
            return False
        q += 1
    return True


@lru_cache(maxsize=None)
def quadratic(m: int) -> FieldSpec:
    m = int(m)
    if m in (0, 1) or not _squarefree(m):
        raise FieldError(f"m={m} must be squarefree and not 0 or 1")
    return _build(f"quad:{m}", "quadratic", m, (-m, 0, 1), cyclic_group(2), [(0, 1), (0, -1)], sign=(1, -1))


@lru_cache(maxsize=None)
def shanks_cubic(t: int) -> FieldSpec:
    t = int(t)
    poly = (-1, -(t + 3), -t, 1)
    maps = [(0, 1), (-2, -(t + 1), 1), (t + 2, t, -1)]
    return _build(f"shanks:{t}", "shanks", t, poly, cyclic_group(3), maps)


@lru_cache(maxsize=None)
def quintic_mu11() -> FieldSpec:
    # x = zeta + 1/zeta, s: zeta -> zeta^2, so s^k sends x to zeta^(2^k) + 1/zeta^(2^k)
    poly = (1, 3, -3, -4, 1, 1)
    maps = [
        (0, 1),
        (-2, 0, 1),
        (2, 0, -4, 0, 1),
        (0, -3, 0, 1),
        (-1, 2, 3, -1, -1),
    ]
    return _build("quintic11", "quintic", None, poly, cyclic_group(5), maps)


def _fr(*pairs):
    return tuple(Fraction(a, b) for a, b in pairs)


@lru_cache(maxsize=None)
def d6_standard() -> FieldSpec:
    poly = (31, 36, 27, -4, 9, 0, 1)
    # low degree first
    maps = [
        (0, 1),
        _fr((419, 180), (403, 180), (-1, 45), (11, 18), (1, 180), (11, 180)),
        _fr((127, 180), (509, 180), (-38, 45), (13, 18), (-7, 180), (13, 180)),
        _fr((-91, 45), (-137, 45), (26, 45), (-8, 9), (1, 45), (-4, 45)),
        _fr((-79, 60), (-73, 60), (-4, 15), (-1, 6), (-1, 60), (-1, 60)),
        _fr((11, 36), (-65, 36), (5, 9), (-5, 18), (1, 36), (-1, 36)),
    ]
    return _build("d6", "d6", None, poly, D6_GROUP, maps, sign=(1, 1, 1, -1, -1, -1))


def make_field(kind: str, param: int | None = None) -> FieldSpec:
    kind = kind.lower()
    if kind in ("quadratic", "quad"):
        return quadratic(param)
    if kind in ("shanks", "shanks_cubic", "c3"):
        return shanks_cubic(param)
    if kind in ("quintic", "quintic11", "quintic_mu11", "c5"):
        return quintic_mu11()
    if kind in ("d6", "d6_standard"):
        return d6_standard()
    raise FieldError(f"unknown field kind {kind!r}")


def parse_field(text: str) -> FieldSpec:
    """Parse a field string such as 'quad:6', 'shanks:41', 'c3:11', 'quintic11', 'd6'."""
    text = text.strip().lower()
    name, _, arg = text.partition(":")
    try:
        param = int(arg) if arg else None
    except ValueError:
        raise FieldError(f"bad field parameter in {text!r}") from None
    if name in ("quad", "shanks", "c3") and param is None:
        raise FieldError(f"{name} needs a parameter, e.g. {name}:6")
    return make_field(name, param)


def conjugate(elem: RingElement, nu: int) -> RingElement:
    """elem^nu computed mod the element's modulus."""
    C = elem.field.conj_matrices(elem.modulus)[nu]
    n = elem.field.degree
    c = elem.coeffs
    return RingElement(tuple(sum(C[i][k] * c[k] for k in range(n)) for i in range(n)), elem.modulus, elem.field)


def norm(eta: Sequence[int], fld: FieldSpec) -> int:
    """N_{K/Q}(eta) for an integer element given low degree first."""
    return norm_int(list(eta), fld.poly)
