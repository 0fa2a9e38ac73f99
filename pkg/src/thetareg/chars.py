"""Rational and p-adic character data for C2, C3, C5 and D6.

A rational character chi is an orbit of absolutely irreducible characters
phi under Galois; its value field is Q(mu_d).  Over Q_p the orbit breaks
into h p-adic characters theta, each of residual degree f = ord_d(p).

Probabilities come in two flavours.  ``rank_deficiency_probability`` and
``heuristic_vanish_probability`` are the inclusion-exclusion and 1/p^(f d^2)
heuristics (constants taken as 1).  The ``exact_*`` functions give the
probabilities for alpha uniform in F_p^n, where the theta-component of alpha
is a uniform element of the matrix algebra M_k(F_{p^f}), k = phi(1).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .primes import multiplicative_order, roots_of_unity

__all__ = [
    "RationalCharacter",
    "PAdicCharacter",
    "SplittingData",
    "character_table",
    "splitting",
    "theta_list",
    "rank_deficiency_probability",
    "exact_rank_deficiency_probability",
    "heuristic_vanish_probability",
    "exact_vanish_probability",
    "exact_full_multiplicity_probability",
    "euler_phi",
]


def euler_phi(d: int) -> int:
    return sum(1 for k in range(1, d + 1) if _gcd(k, d) == 1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class RationalCharacter:
    name: str
    degree: int  # phi(1)
    d: int  # value field Q(mu_d); 1 when all values are rational
    n_phi: int  # absolutely irreducible characters in the orbit

    @property
    def trivial(self) -> bool:
        return self.name == "1"


@dataclass(frozen=True)
class SplittingData:
    f: int
    h: int


@dataclass(frozen=True)
class PAdicCharacter:
    chi: str
    label: str
    f: int
    degree: int
    # for cyclic groups: the irreducible factor over F_p (low first, monic)
    # of X^n - 1 whose roots are the values theta(s)
    factor: tuple | None = None
    r: int | None = None  # theta(s) when f = 1


_TABLES = {
    "C2": (RationalCharacter("1", 1, 1, 1), RationalCharacter("chi", 1, 2, 1)),
    "C3": (RationalCharacter("1", 1, 1, 1), RationalCharacter("chi", 1, 3, 2)),
    "C5": (RationalCharacter("1", 1, 1, 1), RationalCharacter("chi", 1, 5, 4)),
    "D6": (
        RationalCharacter("1", 1, 1, 1),
        RationalCharacter("chi1", 1, 2, 1),
        RationalCharacter("chi2", 2, 1, 1),
    ),
}


def character_table(group_name: str) -> tuple:
    try:
        return _TABLES[group_name]
    except KeyError:
        raise ValueError(f"no character table for {group_name}") from None


def _lookup(group_name: str, chi: str) -> RationalCharacter:
    for c in character_table(group_name):
        if c.name == chi:
            return c
    raise ValueError(f"{group_name} has no character {chi!r}")


def splitting(chi: RationalCharacter, p: int) -> SplittingData:
    if chi.d > 1 and p % chi.d == 0:
        raise ValueError(f"p={p} divides the order {chi.d}")
    f = 1 if chi.d <= 2 else multiplicative_order(p % chi.d, chi.d)
    return SplittingData(f, chi.n_phi // f)




def _cyclotomic_factors(d: int, p: int, f: int) -> list[tuple]:
    """Monic irreducible factors of Phi_d over F_p (all of degree f).

    For f = 1 these are X - r over the residues r of order d; otherwise the
    factorization is delegated to sympy's finite-field factoring.
    """
    if f == 1:
        roots = roots_of_unity(d, p)
        return [((-r) % p, 1) for r in roots]
    from sympy import Poly, cyclotomic_poly, symbols, GF

    X = symbols("X")
    fac = Poly(cyclotomic_poly(d, X), X, domain=GF(p)).factor_list()[1]
    out = []
    for g, _ in fac:
        coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
        out.append(tuple(coeffs))
    return sorted(out)


def theta_list(group_name: str, p: int) -> list[PAdicCharacter]:
    """All p-adic characters of the group for the prime p."""
    out = []
    for chi in character_table(group_name):
        sd = splitting(chi, p)
        if group_name == "D6" or chi.d <= 2:
            factor = None
            r = None
            if group_name != "D6":
                r = 1 if chi.d == 1 else p - 1
                factor = ((-r) % p, 1)
            out.append(PAdicCharacter(chi.name, chi.name, sd.f, chi.degree, factor, r))
            continue
        for g in _cyclotomic_factors(chi.d, p, sd.f):
            if sd.f == 1:
                r = (-g[0]) % p
                out.append(PAdicCharacter(chi.name, f"{chi.name}[r={r}]", 1, 1, g, r))
            elif sd.h == 1:
                out.append(PAdicCharacter(chi.name, chi.name, sd.f, 1, g, None))
            else:
                label = "+".join(f"{c}x^{k}" for k, c in enumerate(g) if c)
                out.append(PAdicCharacter(chi.name, f"{chi.name}[{label}]", sd.f, 1, g, None))
    return out


def _group_of(field_or_group) -> str:
    return getattr(getattr(field_or_group, "group", None), "name", field_or_group)


def rank_deficiency_probability(field, p: int) -> float:
    """Inclusion-exclusion of 1/p^f over all theta: 1 - prod(1 - p^-f)."""
    return 1.0 - prod(1.0 - p ** (-t.f) for t in theta_list(_group_of(field), p))


def heuristic_vanish_probability(f: int, delta: int, p: int) -> float:
    return float(p) ** (-(f * delta * delta))


def exact_vanish_probability(theta: PAdicCharacter, p: int) -> float:
    """P(theta-regulator vanishes) for uniform alpha: singular k x k matrix over F_q."""
    q = float(p) ** theta.f
    return 1.0 - prod(1.0 - q ** (-i) for i in range(1, theta.degree + 1))


def exact_full_multiplicity_probability(theta: PAdicCharacter, p: int) -> float:
    """P(delta_theta = phi(1)), i.e. the theta-component of alpha is zero."""
    return float(p) ** (-(theta.f * theta.degree * theta.degree))


def exact_rank_deficiency_probability(field, p: int) -> float:
    return 1.0 - prod(1.0 - exact_vanish_probability(t, p) for t in theta_list(_group_of(field), p))
