from fractions import Fraction

import pytest
import sympy

from thetareg.fields import FieldError, conjugate, make_field, norm, parse_field, quadratic, shanks_cubic
from thetareg.ring import RingElement, ring_mul

X = sympy.symbols("x")
ALL = ["quad:6", "quad:-1", "shanks:11", "shanks:41", "quintic11", "d6"]


def _sym(coeffs):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(coeffs))


@pytest.mark.parametrize("key", ALL)
def test_maps_are_roots_of_q(key):
    f = parse_field(key)
    q = sum(c * X**k for k, c in enumerate(f.poly))
    for s in f.conj_maps:
        assert sympy.rem(sympy.expand(q.subs(X, _sym(s))), q, X) == 0


def test_shanks_discriminant_factor():
    f = shanks_cubic(41)
    assert 41**2 + 3 * 41 + 9 == 1813 == 7**2 * 37
    assert f.disc % 1813**2 == 0
    q = sum(c * X**k for k, c in enumerate(f.poly))
    assert f.disc == sympy.discriminant(q, X)


def test_quadratic_six():
    f = quadratic(6)
    assert f.poly == (-6, 0, 1)
    assert f.conj_maps[1] == (Fraction(0), Fraction(-1))


def test_quintic_conjugates():
    f = make_field("quintic11")
    want = [(0, 1), (-2, 0, 1), (2, 0, -4, 0, 1), (0, -3, 0, 1), (-1, 2, 3, -1, -1)]
    assert [tuple(int(c) for c in s) for s in f.conj_maps] == [w + (0,) * (5 - len(w)) for w in want]


def test_d6_first_nontrivial_map():
    f = parse_field("d6")
    assert f.conj_maps[1] == tuple(Fraction(a, 180) for a in (419, 403, -4, 110, 1, 11))
    assert f.denominator_lcm == 180


def test_bad_field_strings():
    with pytest.raises(FieldError):
        parse_field("quad:4")
    with pytest.raises(FieldError):
        parse_field("cubic")
    with pytest.raises(FieldError):
        parse_field("quad")


@pytest.mark.parametrize("t", [11, 17, 41])
def test_shanks_sigma_formula(t, rng):
    f = shanks_cubic(t)
    m = 10007
    for _ in range(10):
        A, B, C = (rng.randrange(-50, 50) for _ in range(3))
        e = RingElement((C, B, A), m, f)
        A2 = A * t + B
        B2 = -A * (t * t + t + 1) - B * (t + 1)
        C2 = -A * (t - 2) - 2 * B + C
        assert conjugate(e, 1).coeffs == RingElement((C2, B2, A2), m, f).coeffs


@pytest.mark.parametrize("key", ALL)
def test_group_closure(key, rng):
    f = parse_field(key)
    p = 1000003
    g = f.group
    e = RingElement(tuple(rng.randrange(p) for _ in range(f.degree)), p, f)
    for nu in range(g.order):
        for mu in range(g.order):
            assert conjugate(conjugate(e, nu), mu) == conjugate(e, g.mul(mu, nu))
    assert conjugate(e, 0) == e


def test_d6_group_relations():
    g = parse_field("d6").group
    s, t = g.index("s"), g.index("t")
    assert g.mul(g.mul(s, s), s) == 0 and g.mul(t, t) == 0
    assert g.mul(s, t) == g.mul(t, g.mul(s, s))
    assert g.labels == ("1", "s", "s2", "t", "ts", "ts2")


@pytest.mark.parametrize(
    "key, eta_low, want",
    [
        ("d6", (-1, 1, -7, 0, -3, 1), 12393229477),
        ("quad:6", (7, 2), 25),
        ("quad:6", (5, 2), 1),
        ("d6", (1,), 1),
    ],
)
def test_norms(key, eta_low, want):
    assert norm(eta_low, parse_field(key)) == want


def test_norm_matches_resultant_and_is_multiplicative(rng):
    f = parse_field("quintic11")
    q = sum(c * X**k for k, c in enumerate(f.poly))
    for _ in range(10):
        a = [rng.randrange(-9, 10) for _ in range(5)]
        b = [rng.randrange(-9, 10) for _ in range(5)]
        pa = sum(c * X**k for k, c in enumerate(a))
        assert norm(a, f) == sympy.resultant(q, pa, X)
        ab = ring_mul(RingElement(a, 10**40, f), RingElement(b, 10**40, f)).coeffs
        ab = [c if c < 10**39 else c - 10**40 for c in ab]
        assert norm(ab, f) == norm(a, f) * norm(b, f)
