"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from knotspec.brackets import Gen


def tensor_image(t) -> dict[tuple, int]:
    """Image of a bracket term in the free associative algebra.

    A generator maps to the one-letter word; ``[a, b]`` maps to
    ``(-1)^|a| (ab - (-1)^(|a||b|) ba)`` with word length as degree.  This
    representation satisfies the graded antisymmetry and Jacobi identities
    used by the library, so it detects any sign slip in normal forms.
    """
    if isinstance(t, Gen):
        return {(t,): 1}
    a, b = tensor_image(t.left), tensor_image(t.right)
    da, db = t.left.weight, t.right.weight
    pre = -1 if da % 2 else 1
    swap = -1 if (da * db) % 2 else 1
    out: dict[tuple, int] = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            out[wa + wb] = out.get(wa + wb, 0) + pre * ca * cb
            out[wb + wa] = out.get(wb + wa, 0) - pre * swap * ca * cb
    return {w: c for w, c in out.items() if c}


def tensor_of_combo(c) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for t, k in c.items():
        for w, v in tensor_image(t).items():
            out[w] = out.get(w, 0) + k * v
    return {w: v for w, v in out.items() if v}


def rational_rank(rows: list[list[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rk = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][c]:
                f = m[i][c] / m[rk][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


def _det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [[Fraction(v) for v in r] for r in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det)


def determinantal_invariants(m: list[list[int]]) -> list[int]:
    """Nonzero Smith diagonal via gcds of k x k minors (tiny matrices only)."""
    nr = len(m)
    nc = len(m[0]) if m else 0
    divisors = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rs in combinations(range(nr), k):
            for cs in combinations(range(nc), k):
                g = gcd(g, _det([[m[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]
