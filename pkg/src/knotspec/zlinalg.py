"""Exact integer linear algebra: Smith and Hermite normal forms, cokernels.

Everything here works over plain Python integers, so there is no overflow and
no floating point.  Matrices are small immutable row-major wrappers.

Conventions
-----------
* ``smith_normal_form(M)`` returns ``(U, D, V)`` with ``U @ M @ V == D``,
  ``U`` and ``V`` unimodular and the diagonal of ``D`` nonnegative with each
  entry dividing the next.
* The cokernel of an ``r x c`` relation matrix is ``Z^c / rowspan``: rows are
  relations, columns are generators.
* ``hermite_normal_form`` takes a list of generating vectors and returns the
  reduced echelon basis of the lattice they span (positive pivots, entries
  above each pivot reduced into ``[0, pivot)``).  Two lattices are equal iff
  these bases coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "IntMatrix",
    "GroupPresentation",
    "smith_normal_form",
    "hermite_normal_form",
    "cokernel_invariants",
    "subgroup_equal",
    "in_lattice",
    "rank",
]


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: int | None = None):
        rows_t = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            if not rows_t:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows_t[0])
        for r in rows_t:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self._rows = rows_t
        self._ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_sparse(cls, rows: Iterable[Mapping[int, int]], ncols: int) -> IntMatrix:
        dense = []
        for r in rows:
            line = [0] * ncols
            for j, v in r.items():
                line[j] += v
            dense.append(line)
        return cls(dense, ncols)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._rows, self._ncols))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]!r})"

    def transpose(self) -> IntMatrix:
        nr, nc = self.shape
        return IntMatrix([[self._rows[i][j] for i in range(nr)] for j in range(nc)], nr)

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        nr, k = self.shape
        k2, nc = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.transpose().rows
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], nc
        )

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self._rows) for j, v in enumerate(r) if i != j)


def _as_lists(m: IntMatrix | Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    if isinstance(m, IntMatrix):
        return m.tolist(), m.shape[1]
    rows = [list(map(int, r)) for r in m]
    if not rows:
        return [], 0
    return rows, len(rows[0])


def _smith(a: list[list[int]], nr: int, nc: int, track: bool):
    """In-place Smith reduction of ``a``; returns (diag, U, V) (U, V None if not tracked)."""
    u = [[int(i == j) for j in range(nr)] for i in range(nr)] if track else None
    v = [[int(i == j) for j in range(nc)] for i in range(nc)] if track else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        if track:
            for r in v:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row dst += q * row src
        rd, rs = a[dst], a[src]
        for j in range(nc):
            if rs[j]:
                rd[j] += q * rs[j]
        if track:
            ud, us = u[dst], u[src]
            for j in range(nr):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):  # col dst += q * col src
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            for r in v:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                x = a[i][t]
                if x:
                    add_row(i, t, -(x // piv))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                x = a[t][j]
                if x:
                    add_col(j, t, -(x // piv))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # bring the smallest leftover of row/column t into the pivot
                best = (abs(piv), t, t)
                for i in range(t + 1, nr):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, nr):
                if any(x % piv for x in a[i][t + 1 :]):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nr, nc))]
    return diag, u, v


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` in Smith normal form."""
    a, nc = _as_lists(m)
    nr = len(a)
    _, u, v = _smith(a, nr, nc, track=True)
    return IntMatrix(u, nr), IntMatrix(a, nc), IntMatrix(v, nc)


@dataclass(frozen=True)
class GroupPresentation:
    """A finitely generated abelian group ``Z^generator_count / rowspan(relations)``.

    ``invariant_factors`` holds the torsion coefficients ``d_1 | d_2 | ...``
    (all ``> 1``); ``free_rank`` is the rank of the free part.
    """

    generator_count: int
    relations: IntMatrix
    invariant_factors: tuple[int, ...] = field(default=())
    free_rank: int = 0

    @classmethod
    def from_relations(
        cls, rows: Iterable[Mapping[int, int]] | IntMatrix, generator_count: int
    ) -> GroupPresentation:
        if isinstance(rows, IntMatrix):
            sparse = [{j: v for j, v in enumerate(r) if v} for r in rows.rows]
            mat = rows
        else:
            sparse = [dict(r) for r in rows]
            mat = IntMatrix.from_sparse(sparse, generator_count)
        torsion, free = _cokernel_sparse(sparse, generator_count)
        return cls(generator_count, mat, torsion, free)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.describe()


def _cokernel_sparse(rows: list[dict[int, int]], ncols: int) -> tuple[tuple[int, ...], int]:
    """Invariants of ``Z^ncols / span(rows)``.

    Unit pivots are eliminated sparsely first (each removes one generator and
    one relation without changing the quotient); whatever is left goes through
    a dense Smith reduction.
    """
    work: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for rid, r in enumerate(rows):
        r = {j: v for j, v in r.items() if v}
        for j in r:
            if not 0 <= j < ncols:
                raise ValueError(f"column index {j} out of range")
        if r:
            work[rid] = r
            for j in r:
                cols.setdefault(j, set()).add(rid)
    alive_cols = set(range(ncols))
    changed = True
    while changed:
        changed = False
        for rid in sorted(work, key=lambda k: len(work[k])):
            r = work.get(rid)
            if r is None:
                continue
            pc = None
            for j, v in r.items():
                if v in (1, -1) and (pc is None or len(cols[j]) < len(cols[pc])):
                    pc = j
            if pc is None:
                continue
            pv = r[pc]
            for other in list(cols[pc]):
                if other == rid:
                    continue
                o = work[other]
                q = o[pc] * pv  # pv is a unit, so o[pc]/pv == o[pc]*pv
                for j, v in r.items():
                    nv = o.get(j, 0) - q * v
                    if nv:
                        if j not in o:
                            cols[j].add(other)
                        o[j] = nv
                    elif j in o:
                        del o[j]
                        cols[j].discard(other)
                if not o:
                    del work[other]
            for j in r:
                cols[j].discard(rid)
            del work[rid]
            alive_cols.discard(pc)
            changed = True
    if not work:
        return (), len(alive_cols)
    used = sorted({j for r in work.values() for j in r})
    index = {j: n for n, j in enumerate(used)}
    dense = []
    for r in work.values():
        line = [0] * len(used)
        for j, v in r.items():
            line[index[j]] = v
        dense.append(line)
    diag, _, _ = _smith(dense, len(dense), len(used), track=False)
    nonzero = [d for d in diag if d]
    torsion = tuple(d for d in nonzero if d > 1)
    free = len(alive_cols) - len(nonzero)
    return torsion, free


def cokernel_invariants(m: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> GroupPresentation:
    """The abelian group ``Z^ncols / rowspan(m)``."""
    if isinstance(m, IntMatrix):
        return GroupPresentation.from_relations(m, m.shape[1])
    rows, nc = _as_lists(m)
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty relation list")
        ncols = nc
    return GroupPresentation.from_relations(IntMatrix(rows, ncols), ncols)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(gens: Iterable[Sequence[int]], ncols: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Reduced echelon basis of the lattice spanned by ``gens``.

    Pivots are positive and every entry above a pivot lies in ``[0, pivot)``,
    which makes the result a canonical invariant of the lattice.
    """
    rows = [list(map(int, g)) for g in gens]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ValueError("generator length mismatch")
    rows = [r for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        piv = live[0]
        for r in live[1:]:
            g, s, t = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [s * x + t * y for x, y in zip(piv, r)]
            new_r = [-b * x + a * y for x, y in zip(piv, r)]
            piv = new_piv
            if any(new_r):
                rest.append(new_r)
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce above pivots
    for i, b in enumerate(basis):
        pc = next(j for j, x in enumerate(b) if x)
        for k in range(i):
            q = basis[k][pc] // b[pc]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], b)]
    return tuple(tuple(b) for b in basis)


def _vectors(gens) -> list[list[int]]:
    if isinstance(gens, IntMatrix):
        return gens.tolist()
    return [list(g) for g in gens]


def subgroup_equal(a, b, ncols: int | None = None) -> bool:
    """Whether two generating sets span the same subgroup of ``Z^n``."""
    va, vb = _vectors(a), _vectors(b)
    lengths = {len(v) for v in va + vb}
    if ncols is not None:
        lengths.add(ncols)
    if len(lengths) > 1:
        raise ValueError("generators live in different ambient ranks")
    n = lengths.pop() if lengths else 0
    return hermite_normal_form(va, n) == hermite_normal_form(vb, n)


def in_lattice(vec: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Membership test against a Hermite basis from :func:`hermite_normal_form`."""
    r = list(vec)
    for b in basis:
        pc = next(j for j, x in enumerate(b) if x)
        if r[pc] % b[pc]:
            return False
        q = r[pc] // b[pc]
        if q:
            r = [x - q * y for x, y in zip(r, b)]
    return not any(r)


def rank(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Row rank over ``Z`` (equivalently over ``Q``)."""
    rows = _vectors(m)
    if not rows:
        return 0
    ncols = len(rows[0])
    _, free = _cokernel_sparse([{j: v for j, v in enumerate(r) if v} for r in rows], ncols)
    return ncols - free
