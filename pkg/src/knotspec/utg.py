"""Labelled unitrivalent trees and marked one-loop graphs.

A :class:`UniTriGraph` stores, for every node, the cyclic tuple of its
neighbours (length 1 for leaves, 3 for trivalent nodes) and a label for each
leaf.  Graphs here never have multiple edges, so neighbours identify edges.

Canonical keys
--------------
Trees are keyed by ``TreeKey(root, planar)``: rooted at the highest leaf,
where ``planar`` is a nested pair structure.  A trivalent node whose cyclic
order is ``(parent, a, b)`` becomes the pair ``(enc(a), enc(b))`` and a leaf
becomes its label.

A graph with one cycle and marks ``(n, m)`` is keyed by
``MarkedKey(n, m, first, second, o)``.  Let ``v_m`` and ``v_n`` be the
trivalent nodes next to leaves ``m`` and ``n``, with ``v_m`` ordered
``(leaf m, a, b)``.  Cutting both nodes leaves two trees.  ``first`` is the
one through ``a`` and ``second`` the one through ``b``, each encoded rooted at
``v_m`` with the stub at ``v_n`` showing up as leaf ``n``.  ``o`` is ``+1``
when ``v_n`` is ordered ``(leaf n, first side, second side)`` and ``-1``
otherwise.

Modulo AS, each class has a *shape*: a representative whose key is fixed by
sorting children by smallest label.  :func:`shape_of` returns the shape and
the sign ``(-1)^(number of flips)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .zlinalg import GroupPresentation

__all__ = [
    "UniTriGraph",
    "TreeKey",
    "MarkedKey",
    "GraphKey",
    "RelationVector",
    "canonical_encode",
    "decode",
    "shape_of",
    "enumerate_trees",
    "tree_keys",
    "marked_keys",
    "relation_vectors",
    "stu_expand",
    "ihx_expand",
    "quotient_group",
    "shape_quotient",
    "to_dot",
    "planar_labels",
]

Planar = Union[int, tuple]


class TreeKey(NamedTuple):
    root: int
    planar: Planar

    def __str__(self) -> str:
        return f"T{self.root}:{_fmt(self.planar)}"


class MarkedKey(NamedTuple):
    n: int
    m: int
    first: Planar
    second: Planar
    o: int

    def __str__(self) -> str:
        return f"M({self.n},{self.m}):{_fmt(self.first)}|{_fmt(self.second)}|{'+' if self.o > 0 else '-'}"


GraphKey = Union[TreeKey, MarkedKey]


def _fmt(p: Planar) -> str:
    if isinstance(p, int):
        return str(p)
    return f"({_fmt(p[0])},{_fmt(p[1])})"


@lru_cache(maxsize=None)
def planar_labels(p: Planar) -> frozenset[int]:
    if isinstance(p, int):
        return frozenset((p,))
    return planar_labels(p[0]) | planar_labels(p[1])


@lru_cache(maxsize=None)
def _min_label(p: Planar) -> int:
    return min(planar_labels(p))


@lru_cache(maxsize=None)
def _canon_planar(p: Planar) -> tuple[int, Planar]:
    if isinstance(p, int):
        return 1, p
    sa, a = _canon_planar(p[0])
    sb, b = _canon_planar(p[1])
    s = sa * sb
    if _min_label(b) < _min_label(a):
        return -s, (b, a)
    return s, (a, b)


def _internal_count(p: Planar) -> int:
    return 0 if isinstance(p, int) else 1 + _internal_count(p[0]) + _internal_count(p[1])


@dataclass(frozen=True)
class UniTriGraph:
    """Unitrivalent graph with cyclic orders, labelled leaves and optional marks.

    ``labels[v]`` is the label of leaf ``v`` and ``0`` for trivalent nodes.
    ``marks`` holds the leaf labels ``(n, m)`` whose neighbours are marked.
    """

    nbrs: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    marks: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        self.validate()

    # -- structure ----------------------------------------------------------

    def validate(self) -> None:
        nv = len(self.nbrs)
        if len(self.labels) != nv:
            raise ValueError("labels and nodes disagree")
        for v, ns in enumerate(self.nbrs):
            if len(ns) not in (1, 3):
                raise ValueError(f"node {v} has degree {len(ns)}")
            if len(set(ns)) != len(ns) or v in ns:
                raise ValueError(f"node {v} has a multiple edge or loop")
            for w in ns:
                if v not in self.nbrs[w]:
                    raise ValueError(f"edge {v}-{w} is not symmetric")
            if (len(ns) == 1) != (self.labels[v] > 0):
                raise ValueError(f"node {v}: leaves and only leaves carry labels")
        leaf_labels = sorted(l for l in self.labels if l)
        if leaf_labels != list(range(1, len(leaf_labels) + 1)):
            raise ValueError("leaf labels must be 1..#leaves")
        seen, stack = {0}, [0]
        while stack:
            for w in self.nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != nv:
            raise ValueError("graph is not connected")
        loops = self.edge_count - nv + 1
        if self.marks is None:
            if loops != 0:
                raise ValueError("an unmarked graph must be a tree")
        else:
            if loops != 1:
                raise ValueError("a marked graph must have exactly one cycle")
            n, m = self.marks
            if n == m:
                raise ValueError("the two marks must differ")
            cyc = self.cycle_nodes()
            for lab in (n, m):
                v = self.nbrs[self.leaf(lab)][0]
                if len(self.nbrs[v]) != 3 or v not in cyc:
                    raise ValueError(f"mark at leaf {lab} is not on the cycle")
            if self.nbrs[self.leaf(n)][0] == self.nbrs[self.leaf(m)][0]:
                raise ValueError("marks sit on the same node")

    @property
    def edge_count(self) -> int:
        return sum(len(ns) for ns in self.nbrs) // 2

    @property
    def degree(self) -> int:
        return len(self.nbrs) // 2

    @property
    def leaf_count(self) -> int:
        return sum(1 for l in self.labels if l)

    def leaf(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"no leaf labelled {label}") from None

    def trivalent(self) -> list[int]:
        return [v for v, ns in enumerate(self.nbrs) if len(ns) == 3]

    def marked_nodes(self) -> tuple[int, int] | None:
        if self.marks is None:
            return None
        return tuple(self.nbrs[self.leaf(l)][0] for l in self.marks)

    def internal_edges(self) -> list[tuple[int, int]]:
        return [
            (v, w)
            for v, ns in enumerate(self.nbrs)
            if len(ns) == 3
            for w in ns
            if v < w and len(self.nbrs[w]) == 3
        ]

    def cycle_nodes(self) -> frozenset[int]:
        """Nodes on the cycle (empty for trees), found by pruning degree-one nodes."""
        deg = [len(ns) for ns in self.nbrs]
        alive = set(range(len(self.nbrs)))
        stack = [v for v in alive if deg[v] == 1]
        while stack:
            v = stack.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in self.nbrs[v]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] == 1:
                        stack.append(w)
        return frozenset(alive)

    @property
    def is_tree(self) -> bool:
        return self.marks is None

    # -- local moves --------------------------------------------------------

    def _replace(self, nbrs: list[list[int]] | list[tuple], labels=None, marks="keep") -> UniTriGraph:
        return UniTriGraph(
            tuple(tuple(ns) for ns in nbrs),
            tuple(self.labels if labels is None else labels),
            self.marks if marks == "keep" else marks,
        )

    def flip(self, v: int) -> UniTriGraph:
        """Reverse the cyclic order at trivalent node ``v`` (the AS move)."""
        ns = self.nbrs[v]
        if len(ns) != 3:
            raise ValueError(f"node {v} is not trivalent")
        nbrs = list(self.nbrs)
        nbrs[v] = (ns[0], ns[2], ns[1])
        return self._replace(nbrs)

    def ihx(self, v: int, w: int) -> tuple[UniTriGraph, UniTriGraph]:
        """The graphs ``G'``, ``G''`` of the IHX relation ``G - G' + G''`` at edge ``v-w``."""
        if w not in self.nbrs[v] or len(self.nbrs[v]) != 3 or len(self.nbrs[w]) != 3:
            raise ValueError(f"{v}-{w} is not an internal edge")
        _, a, b = _rotate(self.nbrs[v], w)
        _, c, d = _rotate(self.nbrs[w], v)

        def build(vn, wn, moved):
            nbrs = [list(ns) for ns in self.nbrs]
            nbrs[v], nbrs[w] = list(vn), list(wn)
            swaps: dict[int, dict[int, int]] = {}
            for node, old, new in moved:
                swaps.setdefault(node, {})[old] = new
            for node, sub in swaps.items():
                nbrs[node] = [sub.get(u, u) for u in self.nbrs[node]]
            return self._replace(nbrs)

        # G': v = (w, b, c), w = (v, d, a);  G'': v = (w, b, d), w = (v, c, a)
        g1 = build((w, b, c), (v, d, a), [(a, v, w), (c, w, v)])
        g2 = build((w, b, d), (v, c, a), [(a, v, w), (d, w, v)])
        return g1, g2

    def stu(self, label: int) -> tuple[UniTriGraph, UniTriGraph]:
        """The graphs ``G'``, ``G''`` with ``STU_n(G) = G' - G''``.

        With the trivalent node next to leaf ``n`` ordered ``(leaf, e1, e2)``,
        ``G'`` carries leaf ``n`` on ``e2`` and ``n + 1`` on ``e1``; ``G''``
        swaps them.  Labels above ``n`` shift up by one.  Marks are dropped.
        """
        ell = self.leaf(label)
        v = self.nbrs[ell][0]
        if len(self.nbrs[v]) != 3:
            raise ValueError(f"leaf {label} is not adjacent to a trivalent node")
        if self.is_tree:
            raise ValueError("STU on a tree splits it into two components")
        _, u1, u2 = _rotate(self.nbrs[v], ell)
        shifted = [l + 1 if l > label else l for l in self.labels]

        def build(on_u1: int, on_u2: int):
            # node ell hangs on u2 (label on_u2), node v hangs on u1 (label on_u1)
            nbrs = [list(ns) for ns in self.nbrs]
            nbrs[ell] = [u2]
            nbrs[v] = [u1]
            nbrs[u2][nbrs[u2].index(v)] = ell
            labels = list(shifted)
            labels[ell], labels[v] = on_u2, on_u1
            return self._replace(nbrs, labels, marks=None)

        return build(label + 1, label), build(label, label + 1)

    def relabel(self, mapping: Mapping[int, int]) -> UniTriGraph:
        labels = [mapping.get(l, l) if l else 0 for l in self.labels]
        marks = None if self.marks is None else tuple(mapping.get(l, l) for l in self.marks)
        return UniTriGraph(self.nbrs, tuple(labels), marks)

    def key(self) -> GraphKey:
        return canonical_encode(self)

    def __str__(self) -> str:
        return str(self.key())


def _rotate(ns: Sequence[int], first: int) -> tuple[int, ...]:
    i = ns.index(first)
    return tuple(ns[i:]) + tuple(ns[:i])


# -- encoding and decoding ----------------------------------------------------


def _enc(g: UniTriGraph, node: int, parent: int, stop: int | None, stub: int, hits: list) -> Planar:
    if node == stop:
        hits.append(parent)
        return stub
    ns = g.nbrs[node]
    if len(ns) == 1:
        return g.labels[node]
    _, a, b = _rotate(ns, parent)
    return (_enc(g, a, node, stop, stub, hits), _enc(g, b, node, stop, stub, hits))


def canonical_encode(g: UniTriGraph) -> GraphKey:
    """Key that identifies ``g`` up to label-, order- and mark-preserving isomorphism."""
    if g.marks is None:
        root = g.leaf_count
        r = g.leaf(root)
        return TreeKey(root, _enc(g, g.nbrs[r][0], r, None, 0, []))
    n, m = g.marks
    lm = g.leaf(m)
    vm = g.nbrs[lm][0]
    ln = g.leaf(n)
    vn = g.nbrs[ln][0]
    _, a, b = _rotate(g.nbrs[vm], lm)
    hits1: list = []
    hits2: list = []
    first = _enc(g, a, vm, vn, n, hits1)
    second = _enc(g, b, vm, vn, n, hits2)
    if len(hits1) != 1 or len(hits2) != 1:
        raise ValueError("marked graph does not split into two trees")
    _, e1, _ = _rotate(g.nbrs[vn], ln)
    o = 1 if e1 == hits1[0] else -1
    return MarkedKey(n, m, first, second, o)


class _Builder:
    def __init__(self) -> None:
        self.nbrs: list[list[int]] = []
        self.labels: list[int] = []

    def node(self, label: int = 0) -> int:
        self.nbrs.append([])
        self.labels.append(label)
        return len(self.nbrs) - 1

    def subtree(self, p: Planar, parent: int, stub: int | None = None, stub_node: int | None = None, hits=None) -> int:
        if isinstance(p, int):
            if p == stub:
                hits.append(parent)
                return stub_node
            v = self.node(p)
            self.nbrs[v] = [parent]
            return v
        v = self.node()
        a = self.subtree(p[0], v, stub, stub_node, hits)
        b = self.subtree(p[1], v, stub, stub_node, hits)
        self.nbrs[v] = [parent, a, b]
        return v


def decode(key: GraphKey) -> UniTriGraph:
    """Inverse of :func:`canonical_encode`."""
    bld = _Builder()
    if isinstance(key, TreeKey):
        r = bld.node(key.root)
        top = bld.subtree(key.planar, r)
        bld.nbrs[r] = [top]
        return UniTriGraph(tuple(map(tuple, bld.nbrs)), tuple(bld.labels))
    n, m, first, second, o = key
    lm = bld.node(m)
    vm = bld.node()
    ln = bld.node(n)
    vn = bld.node()
    bld.nbrs[lm] = [vm]
    bld.nbrs[ln] = [vn]
    hits1: list = []
    hits2: list = []
    a = bld.subtree(first, vm, n, vn, hits1)
    b = bld.subtree(second, vm, n, vn, hits2)
    if len(hits1) != 1 or len(hits2) != 1:
        raise ValueError(f"{key}: each side must contain the stub {n} once")
    bld.nbrs[vm] = [lm, a, b]
    u1, u2 = hits1[0], hits2[0]
    bld.nbrs[vn] = [ln, u1, u2] if o > 0 else [ln, u2, u1]
    return UniTriGraph(tuple(map(tuple, bld.nbrs)), tuple(bld.labels), (n, m))


def shape_of(key: GraphKey) -> tuple[int, GraphKey]:
    """AS-canonical representative of ``key`` and the sign relating them."""
    if isinstance(key, TreeKey):
        s, p = _canon_planar(key.planar)
        return s, TreeKey(key.root, p)
    n, m, first, second, o = key
    s1, a = _canon_planar(first)
    s2, b = _canon_planar(second)
    s = s1 * s2
    ka = sorted(planar_labels(a) - {n})
    kb = sorted(planar_labels(b) - {n})
    if kb < ka:
        a, b = b, a
        s, o = -s, -o
    if o < 0:
        s = -s
    return s, MarkedKey(n, m, a, b, 1)


# -- enumeration --------------------------------------------------------------


@lru_cache(maxsize=None)
def _planars(labels: frozenset[int], shapes: bool) -> tuple[Planar, ...]:
    if len(labels) == 1:
        return (next(iter(labels)),)
    items = sorted(labels)
    out = []
    lo, rest = items[0], items[1:]
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            left = frozenset((lo,) + extra)
            right = labels - left
            for a in _planars(left, shapes):
                for b in _planars(right, shapes):
                    out.append((a, b))
                    if not shapes:
                        out.append((b, a))
    return tuple(out)


def tree_keys(degree: int, shapes: bool = False) -> list[TreeKey]:
    """Keys of all labelled trees of the given degree (or of their AS shapes)."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    root = degree + 1
    return sorted((TreeKey(root, p) for p in _planars(frozenset(range(1, root)), shapes)), key=_key_sort)


def enumerate_trees(degree: int) -> list[UniTriGraph]:
    """All labelled unitrivalent trees of the given degree, one per isomorphism class."""
    return [decode(k) for k in tree_keys(degree)]


def marked_keys(leaves: int, marks: Iterable[tuple[int, int]] | None = None, shapes: bool = False) -> list[MarkedKey]:
    """Keys of one-loop graphs with ``leaves`` leaves marked at each pair in ``marks``.

    Pairs default to every ``(n, m)`` with ``n < m``.
    """
    if marks is None:
        marks = [(n, m) for m in range(1, leaves + 1) for n in range(1, m)]
    out = []
    for n, m in marks:
        others = [l for l in range(1, leaves + 1) if l not in (n, m)]
        for r in range(len(others) + 1):
            for side in combinations(others, r):
                rest = tuple(l for l in others if l not in side)
                if shapes and sorted(rest) < sorted(side):
                    continue
                if len(side) + len(rest) == 0:
                    continue  # two-leaf graph would need a double edge
                for a in _planars(frozenset(side + (n,)), shapes):
                    for b in _planars(frozenset(rest + (n,)), shapes):
                        for o in (1,) if shapes else (1, -1):
                            out.append(MarkedKey(n, m, a, b, o))
    return sorted(out, key=_key_sort)


@lru_cache(maxsize=None)
def _pkey(p: Planar) -> tuple:
    if isinstance(p, int):
        return (0, p)
    return (1, _pkey(p[0]), _pkey(p[1]))


def _key_sort(k: GraphKey) -> tuple:
    if isinstance(k, TreeKey):
        return (0, k.root, _pkey(k.planar))
    return (1, k.n, k.m, _pkey(k.first), _pkey(k.second), k.o)


# -- relations ----------------------------------------------------------------


@dataclass(frozen=True)
class RelationVector:
    """Sparse relation over graph keys, tagged by the move that produced it."""

    kind: str
    coeffs: tuple[tuple[GraphKey, int], ...]

    def as_dict(self) -> dict[GraphKey, int]:
        return dict(self.coeffs)


def _vector(kind: str, pairs: Iterable[tuple[GraphKey, int]], modulo_as: bool) -> RelationVector | None:
    acc: dict[GraphKey, int] = {}
    for k, c in pairs:
        if modulo_as:
            s, k = shape_of(k)
            c *= s
        acc[k] = acc.get(k, 0) + c
    items = tuple(sorted(((k, c) for k, c in acc.items() if c), key=lambda kc: _key_sort(kc[0])))
    return RelationVector(kind, items) if items else None


def ihx_expand(g: UniTriGraph, separated: bool = False) -> list[list[tuple[GraphKey, int]]]:
    """IHX relations ``G - G' + G''`` at each internal edge of ``g``.

    With ``separated`` the edges touching a marked node are skipped.
    """
    skip = set(g.marked_nodes() or ()) if separated else set()
    out = []
    for v, w in g.internal_edges():
        if v in skip or w in skip:
            continue
        g1, g2 = g.ihx(v, w)
        out.append([(g.key(), 1), (g1.key(), -1), (g2.key(), 1)])
    return out


def relation_vectors(gens: Sequence[GraphKey], kind: str, modulo_as: bool = False) -> list[RelationVector]:
    """AS, IHX or IHXsep relation vectors over ``gens``.

    With ``modulo_as`` the generators are AS shapes and every output graph is
    replaced by its shape with the matching sign; otherwise ``gens`` must list
    oriented keys and be closed under the moves.
    """
    kind = kind.upper()
    if kind not in ("AS", "IHX", "IHXSEP"):
        raise ValueError(f"unknown relation kind {kind}")
    index = set(gens)
    out: list[RelationVector] = []
    for key in gens:
        g = decode(key)
        if kind == "AS":
            if modulo_as:
                continue
            rels = [[(key, 1), (g.flip(v).key(), 1)] for v in g.trivalent()]
        else:
            rels = ihx_expand(g, separated=(kind == "IHXSEP"))
        for rel in rels:
            vec = _vector(kind, rel, modulo_as)
            if vec is None:
                continue
            for k, _ in vec.coeffs:
                if k not in index:
                    raise ValueError(f"{kind} output {k} is missing from the generator list")
            out.append(vec)
    return out


def stu_expand(g: UniTriGraph, label: int) -> list[tuple[GraphKey, int]]:
    """``STU_n(g) = G' - G''`` as signed keys."""
    g1, g2 = g.stu(label)
    return [(g1.key(), 1), (g2.key(), -1)]


def quotient_group(gens: Sequence[GraphKey], kinds: Iterable[str], extra: Iterable[Mapping[GraphKey, int]] = (), modulo_as: bool = False) -> GroupPresentation:
    """``Z[gens]`` modulo the listed relation kinds and any ``extra`` vectors."""
    index = {k: i for i, k in enumerate(gens)}
    rows = []
    for kind in kinds:
        for vec in relation_vectors(gens, kind, modulo_as):
            rows.append({index[k]: c for k, c in vec.coeffs})
    for vec in extra:
        row: dict[int, int] = {}
        for k, c in vec.items():
            if k not in index:
                raise ValueError(f"relation mentions unknown generator {k}")
            row[index[k]] = row.get(index[k], 0) + c
        rows.append(row)
    return GroupPresentation.from_relations(rows, len(gens))


def shape_quotient(gens: Sequence[GraphKey], kinds: Iterable[str], extra: Iterable[Mapping[GraphKey, int]] = ()) -> GroupPresentation:
    """Same as :func:`quotient_group` but on AS shapes (AS is built into the generators)."""
    return quotient_group(gens, [k for k in kinds if k.upper() != "AS"], extra, modulo_as=True)


# -- DOT ----------------------------------------------------------------------


def to_dot(g: UniTriGraph, name: str = "G") -> str:
    """Graphviz source: leaves on one rank in label order, marked nodes filled."""
    marked = set(g.marked_nodes() or ())
    lines = [f"graph {name} {{", "  node [fontsize=10];"]
    leaves = sorted((l, v) for v, l in enumerate(g.labels) if l)
    for l, v in leaves:
        lines.append(f'  n{v} [label="{l}", shape=plaintext];')
    for v in g.trivalent():
        order = " ".join(f"n{w}" for w in g.nbrs[v])
        style = "shape=point, width=0.15, style=filled, fillcolor=black" if v in marked else "shape=point, width=0.06"
        lines.append(f'  n{v} [{style}, comment="cyclic order: {order}"];')
    lines.append("  { rank=same; " + " ".join(f"n{v};" for _, v in leaves) + " }")
    if len(leaves) > 1:
        chain = " -- ".join(f"n{v}" for _, v in leaves)
        lines.append(f"  {chain} [style=invis];")
    for v, w in sorted({(min(v, w), max(v, w)) for v, ns in enumerate(g.nbrs) for w in ns}):
        lines.append(f"  n{v} -- n{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
