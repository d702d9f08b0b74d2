"""E^1 entries of the homotopy spectral sequence and the first differential.

``E^1_{p,q}`` is ``pi_q`` of level ``p`` intersected with the kernels of all
codegeneracies.  For ``p >= 2`` only configuration classes survive, indexed by
basic products over ``x(1,p), ..., x(p-1,p)`` in which every generator
occurs; each such product of weight ``w`` contributes ``pi_q(S^(w+1))``.

``d^1: E^1_{p-1,p} -> E^1_{p,p}`` is the alternating sum of coface
pushforwards.  On the separated generators (``DsepElement``) it has the closed
form ``d^1(w) = del^k(w) + del^(p-1)(w)`` implemented by :func:`d1_simplified`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .brackets import (
    Bracket,
    Gen,
    LinComb,
    Term,
    enumerate_basic_products,
    leaves,
    swap_sign,
    jacobi_relation,
    jacobi_signs,
    x,
    y,
)
from .config_space import sphere_group
from .cosimplicial import coface, push_combo
from .zlinalg import GroupPresentation, IntMatrix

__all__ = [
    "E1Entry",
    "e1_entry",
    "DsepElement",
    "dsep_generators",
    "canonicalize_dsep",
    "is_separated",
    "reduce_to_dsep",
    "d1_bruteforce",
    "d1_simplified",
    "d1_low",
    "relabel",
    "separated_jacobi_relations",
]


@dataclass(frozen=True)
class E1Entry:
    p: int
    q: int
    basis: tuple[Term, ...] = ()
    torsion_symbols: tuple[tuple[Term, str], ...] = ()
    formal: tuple[tuple[Term, str], ...] = ()

    @property
    def free_rank(self) -> int:
        return len(self.basis)

    @property
    def realized_group(self) -> GroupPresentation:
        n = self.free_rank
        return GroupPresentation(n, IntMatrix([], n), (), n)

    @property
    def is_zero(self) -> bool:
        return not (self.basis or self.torsion_symbols or self.formal)

    def describe(self) -> str:
        counts = Counter(s for _, s in self.torsion_symbols)
        counts.update(s for _, s in self.formal)
        parts = [sym if c == 1 else f"({sym})^{c}" for sym, c in counts.items()]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "free_rank": self.free_rank,
            "torsion": [s for _, s in self.torsion_symbols],
            "basis": [str(t) for t in self.basis],
            "torsion_basis": [str(t) for t, _ in self.torsion_symbols],
            "formal": [{"index": str(t), "group": s} for t, s in self.formal],
        }


def e1_entry(p: int, q: int) -> E1Entry:
    """``E^1_{p,q}``; zero whenever ``q < p``.

    Summands ``pi_q(S^m)`` are evaluated only for ``q == m`` (``Z``),
    ``pi_3(S^2)`` (``Z``) and the first stable stem (``Z/2``); others are
    returned as formal symbols.
    """
    if p < 0 or q < 0:
        raise ValueError("bidegree must be nonnegative")
    if q < p or p == 0:
        return E1Entry(p, q)
    if p == 1:
        indices: list[Term] = [y(1)] if q >= 2 else []
        dims = {y(1): 2}
    else:
        gens = [x(i, p) for i in range(1, p)]
        spare = q - 1 - (p - 1)
        if spare < 0:
            return E1Entry(p, q)
        bound = {g: 1 + spare for g in gens}
        indices = enumerate_basic_products(
            gens, q - 1, multidegree=lambda md: all(md[g] >= 1 for g in gens), bound=bound
        )
        dims = {t: t.weight + 1 for t in indices}
    basis, torsion, formal = [], [], []
    for t in indices:
        grp = sphere_group(q, dims[t])
        if grp == "0":
            continue
        if grp == "Z":
            basis.append(t)
        elif grp.startswith("Z/"):
            torsion.append((t, grp))
        else:
            formal.append((t, grp))
    return E1Entry(p, q, tuple(basis), tuple(torsion), tuple(formal))


# -- separated generators ---------------------------------------------------


def _labels(t: Term) -> list[int]:
    return [g.i for g in leaves(t)]


def _min_label(t: Term) -> int:
    return min(_labels(t))


@dataclass(frozen=True)
class DsepElement:
    """A bracket ``[c1, c2]`` over ``x(., p-1)`` with ``x(k, p-1)`` once on each side."""

    term: Bracket
    p: int
    k: int
    left_labels: frozenset[int] = field(compare=False)
    right_labels: frozenset[int] = field(compare=False)

    @classmethod
    def from_term(cls, t: Term, p: int) -> DsepElement:
        k = validate_dsep(t, p)
        return cls(t, p, k, frozenset(_labels(t.left)), frozenset(_labels(t.right)))

    @property
    def c1(self) -> Term:
        return self.term.left

    @property
    def c2(self) -> Term:
        return self.term.right

    def __str__(self) -> str:
        return str(self.term)


def validate_dsep(t: Term, p: int) -> int:
    """Check the separated-generator invariants and return the repeated label."""
    if p < 4:
        raise ValueError("separated generators need p >= 4")
    if not isinstance(t, Bracket):
        raise ValueError(f"{t} is not a bracket")
    for g in leaves(t):
        if g.kind != "x" or g.j != p - 1 or g.i > p - 2:
            raise ValueError(f"{t}: leaf {g} is not among x(1,{p-1})..x({p-2},{p-1})")
    count = Counter(_labels(t))
    if set(count) != set(range(1, p - 1)):
        raise ValueError(f"{t}: every label 1..{p-2} must occur")
    twice = [i for i, c in count.items() if c == 2]
    if len(twice) != 1 or any(c > 2 for c in count.values()):
        raise ValueError(f"{t}: exactly one generator must occur twice")
    (k,) = twice
    left, right = Counter(_labels(t.left)), Counter(_labels(t.right))
    if left[k] != 1 or right[k] != 1:
        raise ValueError(f"{t}: the repeated generator must occur once on each side")
    return k


def is_separated(t: Term, k: int) -> bool:
    if not isinstance(t, Bracket):
        return False
    return _labels(t.left).count(k) == 1 and _labels(t.right).count(k) == 1


def _canon_multilinear(t: Term) -> tuple[int, Term]:
    """Antisymmetry normal form: the child holding the smaller label goes left."""
    if isinstance(t, Gen):
        return 1, t
    sa, a = _canon_multilinear(t.left)
    sb, b = _canon_multilinear(t.right)
    s = sa * sb
    if _min_label(b) < _min_label(a):
        s *= swap_sign(a.weight, b.weight)
        a, b = b, a
    return s, Bracket(a, b)


def canonicalize_dsep(t: Term, p: int) -> tuple[int, DsepElement]:
    """Return ``(sign, element)`` with ``t == sign * element.term``."""
    k = validate_dsep(t, p)
    s1, a = _canon_multilinear(t.left)
    s2, b = _canon_multilinear(t.right)
    s = s1 * s2
    ka = sorted(set(_labels(a)) - {k})
    kb = sorted(set(_labels(b)) - {k})
    if kb < ka:
        s *= swap_sign(a.weight, b.weight)
        a, b = b, a
    return s, DsepElement.from_term(Bracket(a, b), p)


def _canonical_trees(labels: tuple[int, ...], top: int) -> list[Term]:
    """All antisymmetry-canonical multilinear brackets over ``x(i, top)``, ``i`` in ``labels``."""
    if len(labels) == 1:
        return [x(labels[0], top)]
    first, rest = labels[0], labels[1:]
    out = []
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            left = (first,) + extra
            right = tuple(v for v in rest if v not in extra)
            for a in _canonical_trees(left, top):
                for b in _canonical_trees(right, top):
                    out.append(Bracket(a, b))
    return out


def dsep_generators(p: int) -> list[DsepElement]:
    """Every separated generator for ``p``, one per antisymmetry class, in a fixed order."""
    if p < 4:
        raise ValueError("separated generators need p >= 4")
    top = p - 1
    out = []
    for k in range(1, p - 1):
        rest = [i for i in range(1, p - 1) if i != k]
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                other = tuple(v for v in rest if v not in extra)
                if sorted(other) < sorted(extra):
                    continue  # the unordered split is produced from the other side
                left = tuple(sorted((k,) + extra))
                right = tuple(sorted((k,) + other))
                for a in _canonical_trees(left, top):
                    for b in _canonical_trees(right, top):
                        out.append(DsepElement.from_term(Bracket(a, b), p))
    return out


def _k_count(t: Term, k: int) -> int:
    return _labels(t).count(k)


def _separate(t: Term, k: int) -> LinComb:
    """Rewrite a bracket with two copies of ``x(k, .)`` into separated brackets."""
    if isinstance(t, Gen):
        raise ValueError("a generator cannot carry two copies")
    nl, nr = _k_count(t.left, k), _k_count(t.right, k)
    if nl == 1 and nr == 1:
        return LinComb.of(t)
    if nl == 0:
        s = swap_sign(t.left.weight, t.right.weight)
        return _separate(Bracket(t.right, t.left), k) * s
    a1, a2 = t.left, t.right
    out = LinComb()
    if isinstance(a1.left, Gen) and a1.left == a1.right:
        # [[g,g], z] = swap * [z,[g,g]] = swap * 2 (-1)^|z| [g,[g,z]]
        g, z = a1.left, a2
        s = swap_sign(2, z.weight) * 2 * (-1 if z.weight % 2 else 1)
        return LinComb.of(Bracket(g, Bracket(g, z)), s)
    # [[c1,c2], a2] = swap * [a2,[c1,c2]] and Jacobi on (a2, c1, c2)
    for inner, ci in _separate(a1, k).items():
        c1, c2 = inner.left, inner.right
        ea, eb, ec = jacobi_signs(a2.weight, c1.weight, c2.weight)
        s = swap_sign(inner.weight, a2.weight) * ci * -ea
        out.add(Bracket(c1, Bracket(c2, a2)), s * eb)
        out.add(Bracket(c2, Bracket(a2, c1)), s * ec)
    return out


def reduce_to_dsep(t: Term, p: int) -> dict[DsepElement, int]:
    """Express a bracket with one doubled generator as a combination of separated generators."""
    count = Counter(_labels(t))
    for g in leaves(t):
        if g.kind != "x" or g.j != p - 1:
            raise ValueError(f"leaf {g} is not of the form x(i,{p-1})")
    twice = [i for i, c in count.items() if c == 2]
    if len(twice) != 1 or any(c > 2 for c in count.values()) or set(count) != set(range(1, p - 1)):
        raise ValueError(f"{t}: malformed multidegree")
    (k,) = twice
    out: dict[DsepElement, int] = {}
    for term, c in _separate(t, k).items():
        s, el = canonicalize_dsep(term, p)
        v = out.get(el, 0) + s * c
        if v:
            out[el] = v
        else:
            out.pop(el, None)
    return out


def _jacobi_sites(t: Term, path: tuple = ()):
    """Yield ``(path, u, v, w)`` for every node of ``t`` shaped ``[u,[v,w]]``."""
    if isinstance(t, Gen):
        return
    if isinstance(t.right, Bracket):
        yield path, t.left, t.right.left, t.right.right
    yield from _jacobi_sites(t.left, path + (0,))
    yield from _jacobi_sites(t.right, path + (1,))


def _replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    if path[0] == 0:
        return Bracket(_replace_at(t.left, path[1:], new), t.right)
    return Bracket(t.left, _replace_at(t.right, path[1:], new))


def separated_jacobi_relations(p: int) -> list[dict[DsepElement, int]]:
    """Jacobi relations applied inside ``c1`` or ``c2`` of each separated generator.

    The top bracket is never touched, so every term stays separated.  Terms
    are reduced to canonical generators with their antisymmetry signs.
    """
    out = []
    seen = set()
    for w in dsep_generators(p):
        for side in (0, 1):
            for path, u, v, z in _jacobi_sites(w.term.left if side == 0 else w.term.right):
                full = (side,) + path
                rel: dict[DsepElement, int] = {}
                for term, c in jacobi_relation(u, v, z).items():
                    sgn, el = canonicalize_dsep(_replace_at(w.term, full, term), p)
                    rel[el] = rel.get(el, 0) + sgn * c
                rel = {k: v for k, v in rel.items() if v}
                key = frozenset(rel.items())
                if rel and key not in seen:
                    seen.add(key)
                    out.append(rel)
    return out


# -- the differential ---------------------------------------------------------


def d1_bruteforce(w: Term | Mapping[Term, int], p: int) -> LinComb:
    """``sum_{l=0}^{p} (-1)^l delta^l_*(w)`` for ``w`` at level ``p - 1``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    combo = LinComb.of(w) if isinstance(w, (Gen, Bracket)) else LinComb(w)
    out = LinComb()
    for l in range(p + 1):
        out.iadd(push_combo(coface(l, p - 1), combo), -1 if l % 2 else 1)
    return out


def relabel(t: Term, f) -> Term:
    """Apply ``f`` to every configuration leaf, keeping the bracket shape."""
    if isinstance(t, Gen):
        return f(t)
    return Bracket(relabel(t.left, f), relabel(t.right, f))


def d1_simplified(w: DsepElement | Term, p: int | None = None) -> LinComb:
    """``del^k(w) + del^(p-1)(w)`` for a separated generator ``w = [c1, c2]``."""
    if not isinstance(w, DsepElement):
        if p is None:
            raise ValueError("p is required for a bare term")
        w = DsepElement.from_term(w, p)
    p, k, c1, c2 = w.p, w.k, w.c1, w.c2

    def shift(k_to: int):
        def f(g: Gen) -> Gen:
            i = g.i
            if i == k:
                return x(k_to, p)
            return x(i if i < k else i + 1, p)

        return f

    def lift(g: Gen) -> Gen:
        return x(g.i, p)

    sk = -1 if k % 2 else 1
    sp = -1 if (p - 1) % 2 else 1
    out = LinComb()
    out.add(Bracket(relabel(c1, shift(k)), relabel(c2, shift(k + 1))), sk)
    out.add(Bracket(relabel(c1, shift(k + 1)), relabel(c2, shift(k))), sk)
    out.add(Bracket(c1, relabel(c2, lift)), sp)
    out.add(Bracket(relabel(c1, lift), c2), sp)
    return out


def d1_low(p: int) -> list[tuple[Term, LinComb]]:
    """``d^1`` into the diagonal for ``p <= 3``, as (generator, image) pairs."""
    if p == 1:
        return []  # E^1_{0,1} = 0
    if p in (2, 3):
        src = e1_entry(p - 1, p)
        return [(g, d1_bruteforce(g, p)) for g in src.basis]
    raise ValueError("d1_low covers p <= 3 only")
