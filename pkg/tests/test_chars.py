import itertools

import numpy as np
import pytest
from fractions import Fraction

from thetareg.chars import (
    character_table,
    exact_rank_deficiency_probability,
    exact_vanish_probability,
    heuristic_vanish_probability,
    rank_deficiency_probability,
    splitting,
    theta_list,
)
from thetareg.fields import parse_field
from thetareg.linalg import rank_mod_p
from thetareg.montecarlo import extra_uniform_probability
from thetareg.ring import alpha_from_row


def _chi(group, name):
    return next(c for c in character_table(group) if c.name == name)


def test_splitting_examples():
    assert (splitting(_chi("C3", "chi"), 43).f, splitting(_chi("C3", "chi"), 43).h) == (1, 2)
    assert (splitting(_chi("C5", "chi"), 19).f, splitting(_chi("C5", "chi"), 19).h) == (2, 2)
    for p in (7, 13, 101):
        sd = splitting(_chi("D6", "chi2"), p)
        assert (sd.f, sd.h) == (1, 1)


def test_splitting_rejects_p_dividing_order():
    with pytest.raises(ValueError):
        splitting(_chi("C5", "chi"), 5)


@pytest.mark.parametrize("group, p", [("C2", 7), ("C3", 43), ("C3", 41), ("C5", 31), ("C5", 19), ("C5", 7), ("C5", 29), ("D6", 13)])
def test_theta_dimensions_sum_to_order(group, p):
    n = {"C2": 2, "C3": 3, "C5": 5, "D6": 6}[group]
    assert sum(t.f * t.degree**2 for t in theta_list(group, p)) == n


@pytest.mark.parametrize(
    "group, p, formula",
    [
        ("C3", 43, lambda p: 3 / p - 3 / p**2 + 1 / p**3),
        ("C3", 41, lambda p: 1 / p + 1 / p**2 - 1 / p**3),
        ("C5", 31, lambda p: 5 / p - 10 / p**2 + 10 / p**3 - 5 / p**4 + 1 / p**5),
        ("C5", 7, lambda p: 1 / p + 1 / p**4 - 1 / p**5),
        ("C5", 19, lambda p: 1 / p + 2 / p**2 - 2 / p**3 - 1 / p**4 + 1 / p**5),
        ("D6", 37, lambda p: 3 / p - 3 / p**2 + 1 / p**3),
    ],
)
def test_inclusion_exclusion_branches(group, p, formula):
    for q in (p, p + 0):
        assert rank_deficiency_probability(group, q) == pytest.approx(formula(q), rel=1e-12)


def test_reference_probabilities():
    # the reference C3 value for p=43, 0.068685, is not the value of its own
    # formula 3/p - 3/p^2 + 1/p^3; the formula is what is implemented
    assert round(rank_deficiency_probability("C3", 43), 6) == 0.068158
    assert rank_deficiency_probability("C3", 41) == pytest.approx(0.024970, abs=1e-6)
    # reference values are truncated, not rounded
    assert rank_deficiency_probability("C5", 7) == pytest.approx(0.143214, abs=1e-6)
    assert rank_deficiency_probability("D6", 37) == pytest.approx(0.07890, abs=1e-5)
    assert rank_deficiency_probability("C5", 31) == pytest.approx(0.151214, abs=1e-6)


def test_monotone_in_p_within_class():
    split = [p for p in (7, 13, 19, 31, 37, 43, 61) if p % 3 == 1]
    vals = [rank_deficiency_probability("C3", p) for p in split]
    assert all(0 < v < 1 for v in vals) and vals == sorted(vals, reverse=True)


def test_heuristic():
    assert heuristic_vanish_probability(1, 1, 13) == pytest.approx(0.07692, abs=1e-5)
    assert heuristic_vanish_probability(1, 2, 13) == pytest.approx(3.50e-5, rel=1e-2)
    assert heuristic_vanish_probability(2, 1, 19) == 1 / 361


def _count_singular(key, p):
    fld = parse_field(key)
    n = fld.degree
    bad = 0
    for row in itertools.product(range(p), repeat=n):
        if rank_mod_p(alpha_from_row(row, p, fld).rows, p) < n:
            bad += 1
    return Fraction(bad, p**n)


@pytest.mark.parametrize("key, p", [("shanks:11", 7), ("shanks:11", 5), ("quad:6", 13)])
def test_exact_rank_model_by_enumeration(key, p):
    fld = parse_field(key)
    want = 1
    for t in theta_list(fld.group.name, p):
        want *= 1 - Fraction(1, p**t.f) ** 1
    assert _count_singular(key, p) == 1 - want
    assert float(1 - want) == pytest.approx(exact_rank_deficiency_probability(fld, p))


def test_exact_d6_model_by_enumeration():
    # every alpha in F_7^6; the conjugate matrix is singular iff det = 0
    p = 7
    fld = parse_field("d6")
    conj = np.array(fld.conj_matrices(p), dtype=np.int64)
    grid = np.array(list(itertools.product(range(p), repeat=6)), dtype=np.int64)
    rows = np.einsum("gik,bk->bgi", conj, grid) % p
    det = np.rint(np.linalg.det(rows.astype(float))).astype(np.int64) % p
    frac = Fraction(int((det == 0).sum()), p**6)
    assert frac == 1 - Fraction(p - 1, p) ** 3 * (1 - Fraction(1, p**2))
    chi2 = next(t for t in theta_list("D6", p) if t.chi == "chi2")
    assert exact_vanish_probability(chi2, p) == pytest.approx(1 - (1 - 1 / p) * (1 - 1 / p**2))
    assert float(frac) == pytest.approx(exact_rank_deficiency_probability(fld, p))


def test_uniform_two_by_two_mod_p_squared():
    p = 5
    m = p * p
    r = np.arange(m)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    hits = int(((a * d - b * c) % m == 0).sum())
    assert Fraction(hits, m**4) == Fraction(1, p**2) + Fraction(1, p**3) - Fraction(1, p**5)
    assert extra_uniform_probability(p) == pytest.approx(hits / m**4)
