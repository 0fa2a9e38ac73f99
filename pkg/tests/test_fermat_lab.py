import math
from fractions import Fraction

import pytest
import sympy

from thetareg.fermat_lab import (
    cyclotomic_poly,
    factor_phi_tilde,
    factorize,
    fermat_mean_scan,
    multiplicity,
    order_mod,
    phi_homogeneous,
    phi_mod,
    phi_tilde,
    poly_str,
    repeated_primes,
    square_law,
)
from thetareg.regulators import fermat_quotient
from thetareg.scanner import fermat_scan

X = sympy.symbols("x")

# prod_{m <= 40} Phi~_m(14), reference list (84 prime factors, 29 squared)
PRODUCT_14 = [
    3, 5, 11, 13, 17, 19, 23, 29, 29, 31, 37, 41, 43, 47, 61, 67, 71, 79, 101, 103, 113, 137, 157,
    191, 193, 197, 211, 223, 397, 461, 547, 811, 911, 937, 1033, 1061, 2347, 2851, 3361, 3761, 4027,
    5393, 7307, 10627, 13109, 15511, 16097, 18973, 26981, 61001, 100621, 132049, 176597, 698521,
    761437, 1154539, 1383881, 1948981, 2249861, 7027567, 8108731, 14525237, 51111761, 110256001,
    1427145211, 1475750641, 2239000891, 11737870057, 25581350023, 29914249171, 141405986837,
    299113818931, 56693904845761, 77312552100349, 758855846709601, 11284732320255809,
    14837638311110071, 22771730193675277, 396530555859061913, 459715689149916492091,
    3921141330646275580183, 77720275181800334933851, 2984619585279628795345143571,
    6223308177932683558580086481, 26063080998214179685167270877966651,
]


def test_cyclotomic_small():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert poly_str(cyclotomic_poly(6)) == "x^2 - x + 1"


@pytest.mark.parametrize("m", [12, 35, 28, 105, 40])
def test_cyclotomic_against_sympy(m):
    want = sympy.Poly(sympy.cyclotomic_poly(m, X), X).all_coeffs()
    assert list(reversed(cyclotomic_poly(m))) == want


def test_cyclotomic_35_leading_terms():
    s = poly_str(cyclotomic_poly(35))
    assert s.startswith("x^24 - x^23 + x^19")
    assert len(cyclotomic_poly(35)) == 25


def test_phi_tilde_values():
    assert phi_tilde(12, 35).phi_tilde == 72872404828019704577129461
    assert phi_homogeneous(8, 1, 6) == 57
    assert phi_tilde(8, 6).phi_tilde == 19
    assert phi_tilde(7, 1).phi_tilde == 6
    assert phi_tilde(14, 28).phi_tilde == 29**2 * 113 * 3361 * 176597


def test_phi_tilde_rational():
    # Phi_2(u, v) = u + v
    assert phi_tilde(Fraction(3, 5), 2).phi_tilde == 8 // math.gcd(8, 2)
    assert phi_tilde((6, 4), 1).a == Fraction(3, 2)


@pytest.mark.parametrize("a", [0, 1, -1])
def test_degenerate_a(a):
    with pytest.raises(ValueError):
        phi_tilde(a, 5)


def test_factorizations():
    f = factor_phi_tilde(12, 35)
    assert [(int(q), e) for q, e in f.factors] == [(71, 1), (491, 1), (806821, 1), (6089651, 1), (425455031, 1)]
    assert f.complete and f.product() == f.phi_tilde
    f = factor_phi_tilde(14, 28)
    assert [(int(q), e) for q, e in f.factors] == [(29, 2), (113, 1), (3361, 1), (176597, 1)]
    assert factorize(1) == []


def test_factors_are_one_mod_m():
    for m in range(2, 41):
        f = factor_phi_tilde(14, m)
        for q, _ in f.factors:
            assert m % q == 0 or q % m == 1


def test_full_product_list_for_14():
    got = []
    for m in range(1, 41):
        for q, e in factor_phi_tilde(14, m).factors:
            got += [int(q)] * e
    assert sorted(got) == PRODUCT_14
    assert repeated_primes(14, 40) == {28: [29]}


def test_order_mod():
    assert order_mod(8, 19) == 6
    assert order_mod(14, 29) == 28
    assert order_mod(1, 101) == 1
    with pytest.raises(ValueError):
        order_mod(38, 19)


def test_membership_law():
    a = 14
    vals = {m: phi_tilde(a, m).phi_tilde for m in range(1, 41)}
    for p in sympy.primerange(3, 3000):
        if a % p == 0:
            continue
        o = order_mod(a, p)
        for m, v in vals.items():
            if m % p:
                assert (v % p == 0) == (o == m)


def test_telescoping():
    for a in (2, 3, 10):
        for p in sympy.primerange(3, 60):
            if a % p:
                prod = math.prod(phi_homogeneous(a, 1, d) for d in sympy.divisors(p - 1))
                assert prod == a ** (p - 1) - 1


def test_square_law_on_fermat_hits():
    for a in (659, 14, 2, 3, 5):
        hits = fermat_scan(a, 100_000)
        for p in hits:
            if p == 2:
                continue
            law = square_law(a, p)
            assert law["agree"] and law["square"] and law["q_zero"]
        for p in list(sympy.primerange(3, 400)):
            if a % p == 0 or p in hits or order_mod(a, p) % p == 0:
                continue
            law = square_law(a, p)
            assert law["agree"] and not law["square"]


def test_square_law_29():
    law = square_law(14, 29)
    assert law == {"p": 29, "m": 28, "multiplicity": 2, "square": True, "q": 0, "q_zero": True, "agree": True}


def test_phi_mod_matches_exact():
    for m in (6, 12, 35):
        for mod in (7**3, 1000003):
            assert phi_mod(12, m, mod) in (phi_homogeneous(12, 1, m) % mod, None)
    assert multiplicity(14, 29) == 2
    assert multiplicity(14, 3361, 28) == 1


def test_mean_scan():
    r = fermat_mean_scan(839, 100_000)
    assert 0.49 <= r.mean <= 0.51
    assert sum(r.histogram) == r.n
    r = fermat_mean_scan(659, 100_000)
    assert r.n0 == 5 and r.zeros == [23, 131, 2221, 9161, 65983]
    r = fermat_mean_scan(6, 3)
    assert r.n == 0 and r.mean is None and r.undefined


def test_mean_scan_quotients_in_range():
    r = fermat_mean_scan(3, 500)
    direct = [fermat_quotient(3, p) / p for p in sympy.primerange(2, 501) if p != 3]
    assert r.mean == pytest.approx(sum(direct) / len(direct))
