"""Local theta-regulators, the relation module and its theta-decomposition.

All character values are computed from the conjugate rows of alpha
(an ``AlphaData``), working in F_p[x]/(Q).  Rational characters:

* ``1``      the trace, sum over the group of alpha^nu;
* ``chi``    for C2 the coordinate of alpha - alpha' on sqrt(m); for C3 and
             C5 the norm form of the resolvent, a rational constant;
* ``chi1``   (D6) the sign-twisted trace, a multiple of sqrt(-3);
* ``chi2``   (D6) the degree-2 determinant form.

For cyclic fields and p = 1 mod d the resolvents
S_r = sum_k r^-k alpha^(s^k), one per residue r of order d, refine ``chi``
into its p-adic pieces; S_r is an eigenvector of s with eigenvalue r and
vanishes exactly when the corresponding theta does.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .chars import PAdicCharacter, character_table, theta_list
from .fields import FieldSpec, conjugate
from .linalg import det_mod_p, nullspace_mod_p, rank_mod_p
from .primes import roots_of_unity
from .ring import AlphaData, BadPrime, RingElement, eta_power, poly_mulmod, ring_mul, ring_pow

__all__ = [
    "ConsistencyError",
    "RegulatorReport",
    "fermat_quotient",
    "delta_trace",
    "delta_quadratic",
    "delta_cyclic_rational",
    "delta_theta_split",
    "delta_d6_chi2",
    "relation_module",
    "translate",
    "theta_projection_dims",
    "theta_decompose",
    "lift_check",
    "det_group",
    "det_group_element",
    "ring_det",
    "vanish_flags",
    "regulator_report",
    "extra_divisibility_probe",
]


class ConsistencyError(AssertionError):
    """An internal identity failed (a transcription or logic error)."""


# ---------------------------------------------------------------------------
# helpers on F_p[x]/(Q)


def _mul(a, b, fld: FieldSpec, p: int) -> list[int]:
    return poly_mulmod(a, b, fld.q_low, p)


def _add(vs: Sequence[Sequence[int]], coeffs: Sequence[int], p: int) -> list[int]:
    n = len(vs[0])
    return [sum(c * v[i] for c, v in zip(coeffs, vs)) % p for i in range(n)]


def _constant(vec: Sequence[int], what: str) -> int:
    if any(vec[1:]):
        raise ConsistencyError(f"{what} is not a constant: {list(vec)}")
    return vec[0]


def _line_coordinate(vec: Sequence[int], direction: Sequence[int], p: int, what: str) -> int:
    k = next(i for i, w in enumerate(direction) if w % p)
    lam = vec[k] * pow(direction[k], -1, p) % p
    if any((v - lam * w) % p for v, w in zip(vec, direction)):
        raise ConsistencyError(f"{what} is off the sqrt(m) line: {list(vec)}")
    return lam


# ---------------------------------------------------------------------------
# Fermat quotients


def fermat_quotient(a, p: int) -> int:
    """q_p(a) = (a^(p-1) - 1)/p mod p for a rational a = u/v."""
    if isinstance(a, tuple):
        u, v = a
    else:
        fa = Fraction(a)
        u, v = fa.numerator, fa.denominator
    if u % p == 0 or v % p == 0:
        raise BadPrime(p, "p divides the numerator or denominator")
    p2 = p * p
    x = pow(u, p - 1, p2) * pow(pow(v, -1, p2), p - 1, p2) % p2
    return (x - 1) // p % p


# ---------------------------------------------------------------------------
# character values


def delta_trace(alpha: AlphaData) -> int:
    s = _add(alpha.rows, [1] * alpha.n, alpha.p)
    return _constant(s, "trace of alpha")


def delta_quadratic(alpha: AlphaData) -> int:
    """Sign-twisted trace, as a coordinate on the sqrt(m) line."""
    fld = alpha.field
    if fld.sign is None:
        raise ValueError(f"{fld.key} has no quadratic character")
    s = _add(alpha.rows, fld.sign, alpha.p)
    return _line_coordinate(s, fld.sqrt_vec, alpha.p, "sign-twisted trace")


def delta_cyclic_rational(alpha: AlphaData) -> int:
    """Norm form of the resolvent for the cyclic cubic or quintic field."""
    fld, p, e = alpha.field, alpha.p, alpha.rows
    n = alpha.n
    if fld.group.name not in ("C3", "C5"):
        raise ValueError("cyclic fields of degree 3 or 5 only")

    def prods(dist):
        acc = [0] * n
        for i in range(n):
            acc = [(x + y) % p for x, y in zip(acc, _mul(e[i], e[(i + dist) % n], fld, p))]
        return acc

    C = prods(0)
    A = prods(1)
    if n == 3:
        val = [(c - a) % p for c, a in zip(C, A)]
    else:
        B = prods(2)
        apb = [(a + b) % p for a, b in zip(A, B)]
        t1 = _mul(C, [(c - s) % p for c, s in zip(C, apb)], fld, p)
        t2 = _mul(apb, apb, fld, p)
        t3 = _mul(A, B, fld, p)
        val = [(x - y + 5 * z) % p for x, y, z in zip(t1, t2, t3)]
    return _constant(val, "resolvent norm form")


def delta_theta_split(alpha: AlphaData) -> list[tuple[int, tuple]]:
    """(r, S_r) for every r of multiplicative order d mod p (needs p = 1 mod d)."""
    fld, p = alpha.field, alpha.p
    d = alpha.n
    if fld.group.name not in ("C3", "C5") or p % d != 1:
        raise ValueError("split resolvents need a cyclic field with p = 1 mod d")
    out = []
    for r in roots_of_unity(d, p):
        rinv = pow(r, -1, p)
        s = _add(alpha.rows, [pow(rinv, k, p) for k in range(d)], p)
        # s acts on S_r as multiplication by r
        shifted = _add([alpha.rows[(k + 1) % d] for k in range(d)], [pow(rinv, k, p) for k in range(d)], p)
        if any((x - r * y) % p for x, y in zip(shifted, s)):
            raise ConsistencyError(f"S_{r} is not an eigenvector of s")
        out.append((r, tuple(s)))
    return out


# (i, j, sign): the chi2 form is sum sign * alpha^(g_i) * alpha^(g_j), group
# order (1, s, s2, t, ts, ts2)
CHI2_TERMS = (
    (0, 0, 1), (1, 1, 1), (2, 2, 1), (3, 3, -1), (4, 4, -1), (5, 5, -1),
    (0, 1, -1), (1, 2, -1), (2, 0, -1), (3, 4, 1), (4, 5, 1), (5, 3, 1),
)


def delta_d6_chi2(alpha: AlphaData) -> int:
    """Degree-2 determinant form of the D6 conjugates, on the sqrt(-3) line."""
    fld, p, e = alpha.field, alpha.p, alpha.rows
    if fld.group.name != "D6":
        raise ValueError("D6 only")
    acc = [0] * 6
    for i, j, sgn in CHI2_TERMS:
        acc = [(a + sgn * b) % p for a, b in zip(acc, _mul(e[i], e[j], fld, p))]
    return _line_coordinate(acc, fld.sqrt_vec, p, "chi2 form")


# ---------------------------------------------------------------------------
# relation module


def relation_module(alpha: AlphaData) -> list[tuple[int, ...]]:
    """Basis of {c : sum_nu c_nu alpha^nu = 0}, last nonzero entry 1."""
    mt = [list(col) for col in zip(*alpha.rows)]  # transpose: columns are rows of alpha
    return nullspace_mod_p(mt, alpha.p)


def translate(c: Sequence[int], mu: int, fld: FieldSpec, p: int) -> tuple[int, ...]:
    """Left translate by mu: the relation obtained by conjugating with mu."""
    n = len(c)
    out = [0] * n
    for nu in range(n):
        out[fld.group.mul(mu, nu)] = c[nu] % p
    return tuple(out)


def _apply(element: dict, c, fld, p):
    """Apply sum_mu element[mu] * T_mu to the coefficient vector c."""
    n = len(c)
    acc = [0] * n
    for mu, a in element.items():
        t = translate(c, mu, fld, p)
        acc = [(x + a * y) % p for x, y in zip(acc, t)]
    return tuple(acc)


def _cyclic_cofactor(factor: tuple, n: int, p: int) -> list[int]:
    """(X^n - 1)/g over F_p, low degree first."""
    num = [(-1) % p] + [0] * (n - 1) + [1]
    g = list(factor)
    out = [0] * (n - len(g) + 2)
    num = num[:]
    for k in range(len(num) - 1, len(g) - 2, -1):
        coef = num[k]
        if coef:
            shift = k - (len(g) - 1)
            out[shift] = coef
            for i, gi in enumerate(g):
                num[shift + i] = (num[shift + i] - coef * gi) % p
    if any(num):
        raise ConsistencyError("factor does not divide X^n - 1")
    return out[: n - len(g) + 2]


def _theta_operator(theta: PAdicCharacter, fld: FieldSpec, p: int) -> dict:
    n = fld.degree
    if fld.group.name == "D6":
        if theta.chi == "1":
            return {mu: 1 for mu in range(n)}
        if theta.chi == "chi1":
            return {mu: fld.sign[mu] for mu in range(n)}
        return {0: 2, 1: p - 1, 2: p - 1}  # 3 * e_chi2 = 2 - s - s^2
    h = _cyclic_cofactor(theta.factor, n, p)
    return {k: c for k, c in enumerate(h) if c}


def theta_projection_dims(kernel, fld: FieldSpec, p: int) -> dict[str, int]:
    """dim L^theta for every theta, by projecting the kernel to its isotypic part."""
    out = {}
    for th in theta_list(fld.group.name, p):
        op = _theta_operator(th, fld, p)
        imgs = [_apply(op, c, fld, p) for c in kernel]
        out[th.label] = rank_mod_p(imgs, p) if imgs else 0
    return out


def theta_decompose(flags: dict, split_flags: dict, kernel, fld: FieldSpec, p: int) -> dict[str, int]:
    """Multiplicities delta_theta with dim L^theta = delta * f * phi(1).

    Degree-1 thetas take delta from their vanish flag; the D6 degree-2
    character gets the remaining dimension; the cyclic case with several
    thetas of residual degree f > 1 is split by isotypic projection.
    """
    dim = len(kernel)
    thetas = theta_list(fld.group.name, p)
    delta: dict[str, int] = {}
    proj = None
    used = 0
    for th in thetas:
        if th.degree == 2:
            continue
        if th.label in split_flags:
            v = split_flags[th.label]
        elif th.label == th.chi:
            v = flags[th.chi]
        else:
            if proj is None:
                proj = theta_projection_dims(kernel, fld, p)
            v = proj[th.label] > 0
        delta[th.label] = int(v)
        used += th.f * int(v)
    for th in thetas:
        if th.degree == 2:
            rest = dim - used
            if rest < 0 or rest % 2 or rest // 2 > 2:
                raise ConsistencyError(f"kernel dimension {dim} does not fit the flags {flags}")
            delta[th.label] = rest // 2
            if (rest > 0) != bool(flags[th.chi]):
                raise ConsistencyError(f"chi2 flag disagrees with dimension count at p={p}")
            used = dim
    if used != dim:
        raise ConsistencyError(f"dim L = {dim} but characters account for {used} at p={p}")
    for chi in character_table(fld.group.name):
        any_theta = any(delta[t.label] for t in thetas if t.chi == chi.name)
        if any_theta != bool(flags[chi.name]):
            raise ConsistencyError(f"flag of {chi.name} disagrees with its thetas at p={p}")
    return delta


# ---------------------------------------------------------------------------
# group determinant


def ring_det(mat, fld: FieldSpec, m: int) -> tuple:
    """Determinant of a matrix over (Z/m)[x]/(Q) by Laplace expansion with memo."""
    n = len(mat)
    memo = {0: [1 % m] + [0] * (fld.degree - 1)}

    def rec(cols: int, row: int):
        key = cols
        if key in memo:
            return memo[key]
        acc = [0] * fld.degree
        sgn = 1
        for j in range(n):
            if cols & (1 << j):
                sub = rec(cols & ~(1 << j), row + 1)
                term = poly_mulmod(mat[row][j], sub, fld.q_low, m)
                acc = [(a + sgn * t) % m for a, t in zip(acc, term)]
                sgn = -sgn
        memo[key] = acc
        return acc

    return tuple(rec((1 << n) - 1, 0))


def _coordinate_matrix(alpha: AlphaData) -> list[list[int]]:
    g = alpha.field.group
    return [list(alpha.rows[g.inverse(s)]) for s in range(alpha.n)]


def det_group(alpha: AlphaData) -> int:
    """Group determinant det(alpha^(t s^-1)) divided by the fixed unit det(Omega).

    With Omega[t][i] = (x^i)^t, the matrix (alpha^(t s^-1)) factors as
    P M Omega^T where row s of P M is the coordinate vector of alpha^(s^-1).
    This returns det(P M) mod p; since det(Omega)^2 = disc is prime to p it
    vanishes exactly when the group determinant does.
    """
    return det_mod_p(_coordinate_matrix(alpha), alpha.p)


def _omega_det(fld: FieldSpec, p: int) -> tuple:
    key = ("omega_det", p)
    got = fld._cache.get(key)
    if got is None:
        C = fld.conj_matrices(p)
        n = fld.degree
        # Omega[t][i] = (x^i)^t, a ring element: column i of C_t
        omega = [[tuple(C[t][r][i] for r in range(n)) for i in range(n)] for t in range(n)]
        got = ring_det(omega, fld, p)
        fld._cache[key] = got
    return got


def det_group_element(alpha: AlphaData) -> tuple:
    """Det^G(alpha) itself, as an element of F_p[x]/(Q)."""
    d = det_group(alpha)
    return tuple(d * v % alpha.p for v in _omega_det(alpha.field, alpha.p))


# ---------------------------------------------------------------------------
# lifting


def lift_check(eta, p: int, c: Sequence[int], fld: FieldSpec, eta1: RingElement | None = None) -> bool:
    """True iff prod_nu (eta^nu)^(c_nu (p^n - 1)) = 1 mod p^2."""
    p2 = p * p
    if eta1 is None:
        coeffs = eta.coeffs if isinstance(eta, RingElement) else tuple(int(v) for v in eta)
        eta1 = eta_power(RingElement(coeffs, p2, fld), p)
    acc = RingElement.one(fld, p2)
    for nu, cv in enumerate(c):
        cv %= p
        if cv:
            acc = ring_mul(acc, ring_pow(conjugate(eta1, nu), cv))
    return acc.coeffs == (1,) + (0,) * (fld.degree - 1)


# ---------------------------------------------------------------------------
# reports


@dataclass
class RegulatorReport:
    p: int
    field: str
    residues: dict
    vanish: dict
    split: dict = dc_field(default_factory=dict)  # chi -> [(r, S_r)]
    split_vanish: dict = dc_field(default_factory=dict)  # theta label -> bool
    kernel: list = dc_field(default_factory=list)
    delta: dict = dc_field(default_factory=dict)
    f: dict = dc_field(default_factory=dict)
    det: int = 0

    @property
    def vanishing(self) -> list[str]:
        return [k for k, v in self.vanish.items() if v]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "field": self.field,
            "residues": dict(self.residues),
            "vanish": dict(self.vanish),
            "split": {k: [[r, list(s)] for r, s in v] for k, v in self.split.items()},
            "split_vanish": dict(self.split_vanish),
            "kernel": [list(c) for c in self.kernel],
            "delta": dict(self.delta),
            "f": dict(self.f),
            "det": self.det,
        }


def character_residues(alpha: AlphaData) -> dict[str, int]:
    """Residue of Delta^chi for every rational character of the field."""
    g = alpha.field.group.name
    res = {"1": delta_trace(alpha)}
    if g == "C2":
        res["chi"] = delta_quadratic(alpha)
    elif g in ("C3", "C5"):
        res["chi"] = delta_cyclic_rational(alpha)
    elif g == "D6":
        res["chi1"] = delta_quadratic(alpha)
        res["chi2"] = delta_d6_chi2(alpha)
    return res


def vanish_flags(alpha: AlphaData) -> dict[str, bool]:
    return {k: v == 0 for k, v in character_residues(alpha).items()}


def regulator_report(alpha: AlphaData) -> RegulatorReport:
    fld, p = alpha.field, alpha.p
    residues = character_residues(alpha)
    vanish = {k: v == 0 for k, v in residues.items()}
    split, split_vanish = {}, {}
    if fld.group.name in ("C3", "C5") and p % alpha.n == 1:
        pairs = delta_theta_split(alpha)
        split["chi"] = pairs
        for r, s in pairs:
            split_vanish[f"chi[r={r}]"] = not any(s)
    kernel = relation_module(alpha)
    delta = theta_decompose(vanish, split_vanish, kernel, fld, p)
    f = {t.label: t.f for t in theta_list(fld.group.name, p)}
    rep = RegulatorReport(p, fld.key, residues, vanish, split, split_vanish, kernel, delta, f, det_group(alpha))
    if (rep.det == 0) != bool(kernel) or bool(kernel) != any(vanish.values()):
        raise ConsistencyError(f"kernel, flags and determinant disagree at p={p}")
    return rep


def extra_divisibility_probe(p: int, trials: int, seed: int, fld: FieldSpec | None = None, lo: int = -200, hi: int = 200, jobs: int = 1):
    """Density of p^2 | Reg(E) over random integer elements E of the D6 field.

    Reg is the chi2 form of the conjugates of E divided by sqrt(-3); since p
    is prime to 3 the test is that the form vanishes mod p^2.  Returns
    (hits, trials).
    """
    from .montecarlo import extra_divisibility_counts

    return extra_divisibility_counts(p, trials, seed, lo=lo, hi=hi, jobs=jobs, fld=fld)
