"""Compiled per-prime kernel for scans.

For each prime p the kernel computes alpha = (eta^(p^n-1) - 1)/p mod p in
(Z/p^2)[x]/(Q), its conjugate rows mod p and the F_p-rank of the row
matrix.  Residues mod p^2 are held in uint64 and products are reduced
with a floating-point quotient estimate, which is exact while p^2 < 2^42
(p < 2^21).  ``ring.alpha_of`` is the reference implementation and is used
for larger p.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_P = 1 << 21

__all__ = ["MAX_P", "scan_kernel", "batch_kernel", "quad_form_zero", "fields_arrays"]


@njit(cache=True, inline="always")
def _mulmod(a, b, m):
    # a, b < m < 2^42 (uint64).  The float quotient is off by at most one,
    # and the remainder is recovered exactly in wrapping 64-bit arithmetic.
    q = np.uint64(np.float64(a) * np.float64(b) / np.float64(m))
    r = np.int64(a * b - q * m)
    if r < 0:
        r += np.int64(m)
    elif r >= np.int64(m):
        r -= np.int64(m)
    return np.uint64(r)


@njit(cache=True, inline="always")
def _addmod(a, b, m):
    s = a + b
    return s - m if s >= m else s


@njit(cache=True)
def _polymul(a, b, negq, m, n, out, tmp):
    for k in range(2 * n - 1):
        tmp[k] = 0
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            tmp[i + j] = _addmod(tmp[i + j], _mulmod(ai, b[j], m), m)
    for k in range(2 * n - 2, n - 1, -1):
        c = tmp[k]
        if c == 0:
            continue
        base = k - n
        for i in range(n):
            tmp[base + i] = _addmod(tmp[base + i], _mulmod(c, negq[i], m), m)
    for i in range(n):
        out[i] = tmp[i]


@njit(cache=True)
def _powmod(a, e, negq, m, n, out, tmp, sq):
    # out = a^e, e >= 0 (int64)
    for i in range(n):
        out[i] = 0
        sq[i] = a[i]
    out[0] = 1 % m
    while e > 0:
        if e & 1:
            _polymul(out, sq, negq, m, n, out, tmp)
        e >>= 1
        if e > 0:
            _polymul(sq, sq, negq, m, n, sq, tmp)


@njit(cache=True)
def _inv(a, p):
    # modular inverse by extended Euclid, p prime, a != 0 mod p
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _rank_rect(mat, p):
    # rank over F_p of a k x n int64 matrix with entries in [0, p)
    a = mat.copy()
    k, n = a.shape
    r = 0
    for c in range(n):
        if r == k:
            break
        piv = -1
        for i in range(r, k):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv(a[r, c], p)
        for j in range(n):
            a[r, j] = a[r, j] * inv % p
        for i in range(k):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(n):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


@njit(cache=True)
def _alpha_one(eta, p, qlow, n, out, ua, negq, z, t, w, tmp, sq):
    """alpha of one eta into out (low first); False when eta is not a unit mod p."""
    p2 = p * p
    m = np.uint64(p2)
    for i in range(n):
        ua[i] = np.uint64(eta[i] % p2)
        negq[i] = np.uint64((-qlow[i]) % p2)
    # z = eta^(p-1); then n-1 times z = z^p * t
    _powmod(ua, p - 1, negq, m, n, z, tmp, sq)
    for i in range(n):
        t[i] = z[i]
    for _ in range(n - 1):
        _powmod(z, p, negq, m, n, w, tmp, sq)
        _polymul(w, t, negq, m, n, z, tmp)
    pp = np.uint64(p)
    if z[0] % pp != 1:
        return False
    for i in range(1, n):
        if z[i] % pp != 0:
            return False
    out[0] = np.int64((z[0] - np.uint64(1)) // pp)
    for i in range(1, n):
        out[i] = np.int64(z[i] // pp)
    return True


@njit(cache=True)
def scan_kernel(primes, eta, qlow, map_num, map_den, alphas, ranks, status):
    """Fill alphas[k] (low first), ranks[k] and status[k] for primes[k].

    status: 0 ok, 1 eta not a unit mod p, 2 a denominator is divisible by p.
    eta, qlow: int64 coefficient vectors low first; map_num/map_den: n x n.
    """
    n = qlow.shape[0]
    ua = np.zeros(n, dtype=np.uint64)
    negq = np.zeros(n, dtype=np.uint64)
    z = np.zeros(n, dtype=np.uint64)
    t = np.zeros(n, dtype=np.uint64)
    w = np.zeros(n, dtype=np.uint64)
    tmp = np.zeros(2 * n - 1, dtype=np.uint64)
    sq = np.zeros(n, dtype=np.uint64)
    sp = np.zeros(n, dtype=np.uint64)
    cur = np.zeros(n, dtype=np.uint64)
    nq = np.zeros(n, dtype=np.uint64)
    rows = np.zeros((n, n), dtype=np.int64)
    conj = np.zeros((n, n), dtype=np.int64)
    for k in range(primes.shape[0]):
        p = primes[k]
        if not _alpha_one(eta, p, qlow, n, alphas[k], ua, negq, z, t, w, tmp, sq):
            status[k] = 1
            continue
        pp = np.uint64(p)
        # conjugation matrices mod p
        bad = False
        for i in range(n):
            nq[i] = np.uint64((-qlow[i]) % p)
        for nu in range(n):
            for i in range(n):
                d = map_den[nu, i] % p
                if d == 0:
                    bad = True
                sp[i] = np.uint64((map_num[nu, i] % p) * _inv(d, p) % p) if d != 0 else np.uint64(0)
            for i in range(n):
                cur[i] = 0
            cur[0] = 1
            for col in range(n):
                for i in range(n):
                    conj[i, col] = np.int64(cur[i])
                _polymul(cur, sp, nq, pp, n, cur, tmp)
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc = (acc + conj[i, j] * alphas[k, j]) % p
                rows[nu, i] = acc
        if bad:
            status[k] = 2
            continue
        status[k] = 0
        ranks[k] = _rank_rect(rows, p)


@njit(cache=True)
def batch_kernel(etas, p, qlow, conj, bases, dims, alphas, ranks, theta_ranks, valid):
    """Fixed-p batch: alpha, conjugate-matrix rank and theta-projection ranks.

    conj[nu] is the conjugation matrix mod p; bases[th, :dims[th]] spans the
    theta-part of F_p[G] (coefficient vectors over the group).  For each
    draw, theta_ranks[b, th] = rank of the images sum_nu c_nu alpha^nu of
    that basis; it falls short of dims[th] exactly when theta vanishes.
    """
    n = qlow.shape[0]
    ua = np.zeros(n, dtype=np.uint64)
    negq = np.zeros(n, dtype=np.uint64)
    z = np.zeros(n, dtype=np.uint64)
    t = np.zeros(n, dtype=np.uint64)
    w = np.zeros(n, dtype=np.uint64)
    tmp = np.zeros(2 * n - 1, dtype=np.uint64)
    sq = np.zeros(n, dtype=np.uint64)
    rows = np.zeros((n, n), dtype=np.int64)
    kmax = bases.shape[1]
    img = np.zeros((kmax, n), dtype=np.int64)
    for b in range(etas.shape[0]):
        if not _alpha_one(etas[b], p, qlow, n, alphas[b], ua, negq, z, t, w, tmp, sq):
            valid[b] = False
            continue
        valid[b] = True
        for nu in range(n):
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc = (acc + conj[nu, i, j] * alphas[b, j]) % p
                rows[nu, i] = acc
        ranks[b] = _rank_rect(rows, p)
        for th in range(bases.shape[0]):
            k = dims[th]
            for r in range(k):
                for i in range(n):
                    acc = 0
                    for nu in range(n):
                        acc = (acc + bases[th, r, nu] * rows[nu, i]) % p
                    img[r, i] = acc
            theta_ranks[b, th] = _rank_rect(img[:k], p)


@njit(cache=True)
def quad_form_zero(elems, conj, qlow, m, terms, hits):
    """hits[b] = (sum sign * E^(g_i) * E^(g_j) = 0 mod m) for E = elems[b].

    conj[nu] is the conjugation matrix mod m; terms rows are (i, j, sign).
    """
    n = qlow.shape[0]
    um = np.uint64(m)
    negq = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        negq[i] = np.uint64((-qlow[i]) % m)
    rows = np.zeros((n, n), dtype=np.uint64)
    e = np.zeros(n, dtype=np.int64)
    prod = np.zeros(n, dtype=np.uint64)
    acc = np.zeros(n, dtype=np.uint64)
    tmp = np.zeros(2 * n - 1, dtype=np.uint64)
    for b in range(elems.shape[0]):
        for i in range(n):
            e[i] = elems[b, i] % m
        for nu in range(n):
            for i in range(n):
                c = np.uint64(0)
                for j in range(n):
                    c = _addmod(c, _mulmod(np.uint64(conj[nu, i, j]), np.uint64(e[j]), um), um)
                rows[nu, i] = c
        for i in range(n):
            acc[i] = 0
        for k in range(terms.shape[0]):
            _polymul(rows[terms[k, 0]], rows[terms[k, 1]], negq, um, n, prod, tmp)
            for i in range(n):
                if terms[k, 2] > 0:
                    acc[i] = _addmod(acc[i], prod[i], um)
                else:
                    acc[i] = _addmod(acc[i], um - prod[i] if prod[i] else prod[i], um)
        z = True
        for i in range(n):
            if acc[i] != 0:
                z = False
                break
        hits[b] = z


def fields_arrays(fld):
    """Integer arrays describing a field for ``scan_kernel``."""
    n = fld.degree
    num = np.zeros((n, n), dtype=np.int64)
    den = np.ones((n, n), dtype=np.int64)
    for nu, s in enumerate(fld.conj_maps):
        for i, c in enumerate(s):
            num[nu, i] = c.numerator
            den[nu, i] = c.denominator
    qlow = np.array(fld.q_low, dtype=np.int64)
    return qlow, num, den
