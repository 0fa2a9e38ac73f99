from fractions import Fraction

import pytest

from conftest import report
from thetareg.fields import parse_field
from thetareg.linalg import in_span_mod_p
from thetareg.regulators import (
    ConsistencyError,
    delta_cyclic_rational,
    delta_d6_chi2,
    delta_quadratic,
    delta_theta_split,
    delta_trace,
    det_group,
    det_group_element,
    fermat_quotient,
    lift_check,
    regulator_report,
    relation_module,
    theta_decompose,
    translate,
)
from thetareg.ring import BadPrime, alpha_from_row, alpha_of, poly_mulmod


# Fermat quotients


@pytest.mark.parametrize("a, p", [(659, 23), (659, 131), (659, 2221), (14, 29), (1, 101)])
def test_fermat_quotient_zero(a, p):
    assert fermat_quotient(a, p) == 0


def test_fermat_quotient_direct():
    for p in (5, 7, 11, 13, 97):
        for a in (2, 3, 10):
            if a % p:
                assert fermat_quotient(a, p) == ((a ** (p - 1) - 1) // p) % p
    # a = u/v: (u/v)^(p-1) = 1 + p q with q = q(u) - q(v)
    assert fermat_quotient(Fraction(3, 2), 11) == (fermat_quotient(3, 11) - fermat_quotient(2, 11)) % 11


def test_fermat_quotient_skip():
    with pytest.raises(BadPrime):
        fermat_quotient(22, 11)


# character values


def test_trace_examples():
    a, rep = report("shanks:41", "3,-2,6", 5)
    assert delta_trace(a) == 4 and rep.residues["1"] == 4
    f = parse_field("d6")
    assert delta_trace(alpha_from_row([0] * 6, 13, f)) == 0


def test_quadratic_examples():
    a, rep = report("quad:6", "2,5", 7)
    assert delta_quadratic(a) == 0
    a, rep = report("quad:6", "2,7", 11)
    assert delta_quadratic(a) == 0
    f = parse_field("quad:6")
    assert delta_quadratic(alpha_from_row([3, 0], 13, f)) == 0
    assert delta_quadratic(alpha_from_row([3, 4], 13, f)) == 8  # 2v with the sqrt factor dropped


def test_cyclic_rational_examples():
    a, _ = report("shanks:41", "3,-2,6", 5)
    assert delta_cyclic_rational(a) == 0
    a, _ = report("quintic11", "-2,1,0,0,-3", 31)
    assert delta_cyclic_rational(a) == 0
    f = parse_field("quintic11")
    assert delta_cyclic_rational(alpha_from_row([7, 0, 0, 0, 0], 31, f)) == 0


def test_c3_form_is_alternating_norm(rng):
    # alpha^2 + alpha'^2 + alpha''^2 - alpha alpha' - alpha' alpha'' - alpha'' alpha
    f = parse_field("shanks:11")
    p = 43
    for _ in range(20):
        a = alpha_from_row([rng.randrange(p) for _ in range(3)], p, f)
        e = a.rows
        mul = lambda u, v: poly_mulmod(u, v, f.q_low, p)  # noqa: E731
        val = [0, 0, 0]
        for i in range(3):
            sq, ad = mul(e[i], e[i]), mul(e[i], e[(i + 1) % 3])
            val = [(x + y - z) % p for x, y, z in zip(val, sq, ad)]
        assert val == [delta_cyclic_rational(a), 0, 0]


def test_split_examples():
    a, _ = report("quintic11", "-2,1,0,0,-3", 31)
    got = dict(delta_theta_split(a))
    assert not any(got[4])
    assert all(any(v) for r, v in got.items() if r != 4)
    f = parse_field("quintic11")
    assert all(not any(s) for _, s in delta_theta_split(alpha_from_row([0] * 5, 31, f)))


def test_split_shanks_17_large_prime():
    p = 1309963
    a, rep = report("shanks:17", "3,-2,6", p)
    assert pow(160549, 3, p) == 1 and 160549 != 1
    got = dict(delta_theta_split(a))
    assert not any(got[160549]) and any(got[pow(160549, 2, p)])
    assert rep.vanish["chi"] and len(rep.kernel) == 1
    # the kernel relation is the resolvent sum_k r^-k alpha^(s^k) up to scale
    c = rep.kernel[0]
    r1 = pow(160549, -1, p)
    res = [pow(r1, k, p) for k in range(3)]
    assert in_span_mod_p(res, [c], p)


def test_split_needs_congruence():
    a, _ = report("shanks:41", "3,-2,6", 5)
    with pytest.raises(ValueError):
        delta_theta_split(a)


def test_split_norm_product(rng):
    for key, p in [("shanks:11", 43), ("quintic11", 31), ("quintic11", 41)]:
        f = parse_field(key)
        for _ in range(30):
            a = alpha_from_row([rng.randrange(p) for _ in range(f.degree)], p, f)
            prod = [1] + [0] * (f.degree - 1)
            for _, s in delta_theta_split(a):
                prod = poly_mulmod(prod, s, f.q_low, p)
            assert prod == [delta_cyclic_rational(a)] + [0] * (f.degree - 1)


def test_d6_chi2_examples(rng):
    a, _ = report("d6", "1,-3,0,-7,1,-1", 7)
    assert delta_d6_chi2(a) == 0
    a, _ = report("d6", "3,-20,15,16,9,21", 7)
    assert delta_d6_chi2(a) == 0
    f = parse_field("d6")
    assert delta_d6_chi2(alpha_from_row([rng.randrange(13) for _ in range(6)], 13, f)) is not None
    # constant on all of G
    assert delta_d6_chi2(alpha_from_row([5, 0, 0, 0, 0, 0], 13, f)) == 0


def test_wrong_group_rejected():
    a, _ = report("quad:6", "2,5", 7)
    with pytest.raises(ValueError):
        delta_cyclic_rational(a)
    with pytest.raises(ValueError):
        delta_d6_chi2(a)


# relation module


def test_kernel_p61_example18():
    a, rep = report("d6", "1,-2,4,-3,1,-1", 61)
    assert len(rep.kernel) == 3
    for v in [(19, 56, 46, 1, 0, 0), (46, 19, 56, 0, 0, 1), (56, 46, 19, 0, 1, 0)]:
        assert in_span_mod_p(v, rep.kernel, 61)
    assert rep.vanish == {"1": False, "chi1": True, "chi2": True}
    # the sum of the three relations is the chi1 relation
    assert in_span_mod_p([1, 1, 1, 60, 60, 60], rep.kernel, 61)


def test_kernel_trivial_cases(rng):
    f = parse_field("d6")
    assert len(relation_module(alpha_from_row([0] * 6, 13, f))) == 6
    while True:
        a = alpha_from_row([rng.randrange(13) for _ in range(6)], 13, f)
        if det_group(a):
            break
    assert relation_module(a) == []


def test_kernel_p69677_normalised():
    _, rep = report("d6", "1,-3,0,-7,1,-1", 69677)
    assert rep.kernel == [(53404, 39540, 46410, 69676, 1, 0), (23267, 16273, 30137, 69676, 0, 1)]


def test_quintic_79_relations():
    a, rep = report("quintic11", "10,-7,-3,1,-2", 79)
    assert a.high_rows()[0] == [37, 13, 19, 3, 10]
    assert len(rep.kernel) == 2
    for v in [(1, 0, -1, -49, 49), (0, -1, -49, 49, 1)]:
        assert in_span_mod_p([c % 79 for c in v], rep.kernel, 79)
    assert sorted(rep.f.values()) == [1, 2, 2]


def test_theta_decompose_examples():
    _, rep = report("d6", "1,-3,0,-7,1,-1", 13)
    assert len(rep.kernel) == 2 and rep.delta == {"1": 0, "chi1": 0, "chi2": 1}
    for u in [(1, 0, -1, 1, 0, -1), (0, -1, 1, -1, 1, 0)]:
        assert in_span_mod_p([c % 13 for c in u], rep.kernel, 13)
    _, rep = report("d6", "3,-20,15,16,9,21", 7)
    assert len(rep.kernel) == 4 and rep.delta["chi2"] == 2
    assert rep.vanish == {"1": False, "chi1": False, "chi2": True}
    f = parse_field("d6")
    with pytest.raises(ConsistencyError):
        theta_decompose({"1": False, "chi1": False, "chi2": False}, {}, [(1, 0, 0, 0, 0, 0)], f, 13)


def test_d6_p13_second_unit():
    a, rep = report("d6", "3,-20,15,16,9,21", 13)
    assert a.high_rows()[0] == [2, 3, 7, 8, 3, 12]
    for v in [(4, 5, 5, 1, 0, 0), (5, 5, 4, 0, 1, 0), (5, 4, 5, 0, 0, 1)]:
        assert in_span_mod_p(v, rep.kernel, 13)
    assert rep.vanish == {"1": True, "chi1": False, "chi2": True}


def test_d6_delta2_conjugates_constant_on_cosets():
    a, _ = report("d6", "3,-20,15,16,9,21", 7)
    h = a.high_rows()
    assert h[0] == h[1] == h[2] == [6, 2, 4, 3, 0, 6]
    assert h[3] == h[4] == h[5] == [1, 5, 3, 4, 0, 6]


def test_kernel_translates(rng):
    for key, p in [("d6", 61), ("d6", 13)]:
        f = parse_field(key)
        eta = "1,-2,4,-3,1,-1" if p == 61 else "1,-3,0,-7,1,-1"
        _, rep = report(key, eta, p)
        for c in rep.kernel:
            for mu in range(6):
                assert in_span_mod_p(translate(c, mu, f, p), rep.kernel, p)


def test_inert_c3_vanishing_forces_equal_conjugates(rng):
    f = parse_field("shanks:11")
    for p in (5, 17, 23, 29):
        if f.skip_reason(p):
            continue
        for _ in range(3000):
            a = alpha_from_row([rng.randrange(p) for _ in range(3)], p, f)
            if delta_cyclic_rational(a) == 0:
                assert a.rows[0] == a.rows[1] == a.rows[2]


# determinant


def test_quadratic_determinant_flag(rng):
    f = parse_field("quad:6")
    p = 13
    for u in range(p):
        for v in range(p):
            a = alpha_from_row([u, v], p, f)
            assert (det_group(a) == 0) == (u == 0 or v == 0)


def test_c3_determinant_identity(rng):
    # the circulant determinant a^3 + a'^3 + a''^3 - 3 a a' a'', an element of
    # F_p[x]/(Q); the form 3 a a' a'' - (...) is its negative
    f = parse_field("shanks:11")
    p = 43
    for _ in range(20):
        a = alpha_from_row([rng.randrange(p) for _ in range(3)], p, f)
        e = a.rows
        mul = lambda u, v: poly_mulmod(u, v, f.q_low, p)  # noqa: E731
        prod = mul(mul(e[0], e[1]), e[2])
        cubes = [sum(mul(mul(x, x), x)[i] for x in e) for i in range(3)]
        want = [(cubes[i] - 3 * prod[i]) % p for i in range(3)]
        assert list(det_group_element(a)) == want
        # Det = Delta^1 * Delta^chi
        t, r = delta_trace(a), delta_cyclic_rational(a)
        assert want == [t * r % p, 0, 0]


# lifting


def test_lift_examples(rng):
    f = parse_field("d6")
    eta = f.element([1, -3, 0, -7, 1, -1])
    _, rep = report("d6", "1,-3,0,-7,1,-1", 7)
    c = tuple(v % 7 for v in (1, -1, 0, 1, 0, -1))  # 1 - s + t - t s^2
    assert in_span_mod_p(c, rep.kernel, 7)
    assert lift_check(eta, 7, c, f)
    assert lift_check(eta, 7, (0,) * 6, f)
    for _ in range(20):
        c = tuple(rng.randrange(7) for _ in range(6))
        if not in_span_mod_p(c, rep.kernel, 7):
            assert not lift_check(eta, 7, c, f)


def test_report_consistency_and_bookkeeping(rng):
    for key, p in [("d6", 13), ("d6", 7), ("quintic11", 31), ("quintic11", 19), ("shanks:11", 43), ("shanks:11", 41), ("quad:6", 13)]:
        f = parse_field(key)
        for _ in range(200):
            row = [rng.randrange(p) for _ in range(f.degree)]
            if rng.random() < 0.3:
                row = [0] * f.degree
                row[0] = rng.randrange(p)
            rep = regulator_report(alpha_from_row(row, p, f))
            assert sum(rep.delta[t] * rep.f[t] * _deg(key, t) for t in rep.delta) == len(rep.kernel)


def _deg(key, label):
    return 2 if key == "d6" and label == "chi2" else 1


def test_bad_prime_for_unit_check():
    f = parse_field("d6")
    with pytest.raises(BadPrime):
        alpha_of(f.element([1, 0]), 5, f)
