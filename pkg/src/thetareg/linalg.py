"""Dense linear algebra over F_p on small integer matrices."""
from __future__ import annotations

from typing import Sequence

__all__ = ["rref_mod_p", "rank_mod_p", "nullspace_mod_p", "det_mod_p", "in_span_mod_p", "matmul_mod_p"]


def rref_mod_p(mat: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = [[int(v) % p for v in row] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_mod_p(mat, p: int) -> int:
    return len(rref_mod_p(mat, p)[1])


def nullspace_mod_p(mat, p: int) -> list[tuple[int, ...]]:
    """Basis of {c : mat @ c = 0} over F_p.

    One vector per free column j: coordinate j is 1, later coordinates are
    0, so every vector ends in its last nonzero entry 1.
    """
    if not mat:
        return []
    cols = len(mat[0])
    a, pivots = rref_mod_p(mat, p)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * cols
        v[j] = 1
        for row, c in enumerate(pivots):
            v[c] = (-a[row][j]) % p
        basis.append(tuple(v))
    return basis


def det_mod_p(mat, p: int) -> int:
    a = [[int(v) % p for v in row] for row in mat]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return det % p


def in_span_mod_p(vec, basis, p: int) -> bool:
    if not basis:
        return not any(v % p for v in vec)
    return rank_mod_p(list(basis) + [list(vec)], p) == rank_mod_p(basis, p)


def matmul_mod_p(a, b, p: int) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]
