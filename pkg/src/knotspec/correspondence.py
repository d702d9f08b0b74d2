"""Brackets versus graphs: the signed bijections and the combinatorial d^1.

``Psi_T`` sends a bracket to a tree: ``x(i,j)`` is the edge between leaves
``i`` and ``j``; ``[A, B]`` glues the trees of ``A`` and ``B`` at their common
label ``c`` through a new trivalent node ordered ``(new leaf c, A, B)``.  For
brackets over ``x(., p)`` the common label is always ``p`` and the tree is
just the bracket read as a planar binary tree.  The signed version ``psi_T``
multiplies by ``(-1)^(|L_A| + #(L_A x> L_B))`` at every node, where ``L_A``,
``L_B`` are the leaf-label sets of the two sides and ``x>`` counts pairs
``a > b`` avoiding the common label.

``Psi_D`` sends a separated generator ``[c1, c2]`` to the one-loop graph that
glues ``Psi_T(c1)`` and ``Psi_T(c2)`` both at ``p-1`` and at ``k``, marking
the two new nodes.  ``psi_D`` multiplies the signs of ``psi_T(c1)`` and
``psi_T(c2)`` by ``(-1)^(#(L_1 x> L_2))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .brackets import Bracket, Gen, Term, leaves, x
from .spectral import DsepElement
from .utg import (
    MarkedKey,
    TreeKey,
    UniTriGraph,
    canonical_encode,
    decode,
    marked_keys,
    relation_vectors,
    shape_of,
    tree_keys,
)
from .zlinalg import GroupPresentation, IntMatrix, hermite_normal_form, in_lattice, rank

__all__ = [
    "SignedTree",
    "crossings",
    "psi_T",
    "Psi_T",
    "phi_T",
    "psi_D",
    "Psi_D",
    "phi_D",
    "psi_T_combo",
    "d1_combinatorial",
    "stu2_vectors",
    "to_shapes",
    "ihx_basis",
    "e2_diagonal",
    "E2Result",
]

# cyclic order at a join node: (new leaf, left side, right side)
JOIN_LEFT_FIRST = True
# the node glued at the doubled label k is ordered (leaf k, c2 side, c1 side);
# this is the choice under which both forms of d^1 agree exactly
MARK_K_ORIENTATION = -1


@dataclass(frozen=True)
class SignedTree:
    sign: int
    key: TreeKey

    @property
    def tree(self) -> UniTriGraph:
        return decode(self.key)


def crossings(l1: Iterable[int], l2: Iterable[int]) -> int:
    """``#{(a, b) in L1 x L2 : a > b}`` with labels common to both sets ignored."""
    s1, s2 = set(l1), set(l2)
    shared = s1 & s2
    a = sorted(s1 - shared)
    b = sorted(s2 - shared)
    return sum(1 for u in a for v in b if u > v)


def _tree_labels(t: Term) -> frozenset[int]:
    out = set()
    for g in leaves(t):
        if g.kind != "x":
            raise ValueError("trees are defined for configuration brackets only")
        out.update((g.i, g.j))
    return frozenset(out)


class _Tree:
    """Mutable tree used while gluing."""

    def __init__(self) -> None:
        self.nbrs: list[list[int]] = []
        self.labels: list[int] = []

    def node(self, label: int = 0) -> int:
        self.nbrs.append([])
        self.labels.append(label)
        return len(self.nbrs) - 1

    def leaf_of(self, label: int, nodes: set[int]) -> int:
        for v in nodes:
            if self.labels[v] == label:
                return v
        raise ValueError(f"label {label} not found")


def _build(t: Term, tree: _Tree) -> tuple[set[int], int]:
    """Add ``Psi_T(t)`` to ``tree``; return its node set and the node-sign."""
    if isinstance(t, Gen):
        if t.kind != "x":
            raise ValueError("trees are defined for configuration brackets only")
        a, b = tree.node(t.i), tree.node(t.j)
        tree.nbrs[a] = [b]
        tree.nbrs[b] = [a]
        return {a, b}, 1
    na, sa = _build(t.left, tree)
    nb, sb = _build(t.right, tree)
    la, lb = _tree_labels(t.left), _tree_labels(t.right)
    common = la & lb
    if len(common) != 1:
        raise ValueError(f"{t}: the two sides must share exactly one label, got {sorted(common)}")
    (c,) = common
    leaf_a, leaf_b = tree.leaf_of(c, na), tree.leaf_of(c, nb)
    ua, ub = tree.nbrs[leaf_a][0], tree.nbrs[leaf_b][0]
    v = tree.node()
    new = tree.node(c)
    tree.nbrs[new] = [v]
    tree.nbrs[v] = [new, ua, ub] if JOIN_LEFT_FIRST else [new, ub, ua]
    tree.nbrs[ua][tree.nbrs[ua].index(leaf_a)] = v
    tree.nbrs[ub][tree.nbrs[ub].index(leaf_b)] = v
    tree.labels[leaf_a] = tree.labels[leaf_b] = -1  # dead
    tree.nbrs[leaf_a] = tree.nbrs[leaf_b] = []
    nodes = (na | nb | {v, new}) - {leaf_a, leaf_b}
    sign = sa * sb * (-1) ** (len(la) + crossings(la, lb))
    return nodes, sign


def _freeze(tree: _Tree, nodes: set[int], marks=None) -> UniTriGraph:
    order = sorted(nodes)
    index = {v: i for i, v in enumerate(order)}
    nbrs = tuple(tuple(index[w] for w in tree.nbrs[v]) for v in order)
    labels = tuple(tree.labels[v] for v in order)
    return UniTriGraph(nbrs, labels, marks)


def Psi_T(t: Term) -> TreeKey:
    """Unsigned bracket-to-tree bijection."""
    return psi_T(t).key


def psi_T(t: Term) -> SignedTree:
    """Signed tree of a bracket whose sides always share exactly one label."""
    tree = _Tree()
    nodes, sign = _build(t, tree)
    labels = _tree_labels(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise ValueError(f"{t}: labels must be 1..{len(labels)}")
    key = canonical_encode(_freeze(tree, nodes))
    return SignedTree(sign, key)


def _bracket_sign(t: Term) -> int:
    if isinstance(t, Gen):
        return 1
    la, lb = _tree_labels(t.left), _tree_labels(t.right)
    return _bracket_sign(t.left) * _bracket_sign(t.right) * (-1) ** (len(la) + crossings(la, lb))


def _planar_to_bracket(p, top: int) -> Term:
    if isinstance(p, int):
        return x(p, top)
    a, b = (p[0], p[1]) if JOIN_LEFT_FIRST else (p[1], p[0])
    return Bracket(_planar_to_bracket(a, top), _planar_to_bracket(b, top))


def _bracket_to_planar(t: Term):
    if isinstance(t, Gen):
        return t.i
    a, b = _bracket_to_planar(t.left), _bracket_to_planar(t.right)
    return (a, b) if JOIN_LEFT_FIRST else (b, a)


def phi_T(g: UniTriGraph | TreeKey) -> tuple[int, Term]:
    """Inverse of ``psi_T``: ``(sign, bracket over x(., root))``."""
    key = g if isinstance(g, (MarkedKey, TreeKey)) else canonical_encode(g)
    if not isinstance(key, TreeKey):
        raise ValueError("phi_T expects a tree")
    if isinstance(key.planar, int) and key.root == 1:
        raise ValueError("malformed tree")
    t = _planar_to_bracket(key.planar, key.root)
    return _bracket_sign(t), t


def psi_T_combo(c: Mapping[Term, int]) -> dict[TreeKey, int]:
    out: dict[TreeKey, int] = {}
    for t, k in c.items():
        st = psi_T(t)
        out[st.key] = out.get(st.key, 0) + k * st.sign
    return {key: v for key, v in out.items() if v}


# -- separated generators and marked graphs -----------------------------------


def _dsep_sign(w: DsepElement) -> int:
    # the signs already carried by psi_T(c1) and psi_T(c2), then the crossing term
    inner = _bracket_sign(w.c1) * _bracket_sign(w.c2)
    return inner * (-1) ** crossings(w.left_labels, w.right_labels)


def Psi_D(w: DsepElement | Term, p: int | None = None) -> MarkedKey:
    if not isinstance(w, DsepElement):
        w = DsepElement.from_term(w, p)
    return MarkedKey(w.k, w.p - 1, _bracket_to_planar(w.c1), _bracket_to_planar(w.c2), MARK_K_ORIENTATION)


def psi_D(w: DsepElement | Term, p: int | None = None) -> tuple[int, MarkedKey]:
    """Signed marked graph of a separated generator."""
    if not isinstance(w, DsepElement):
        w = DsepElement.from_term(w, p)
    return _dsep_sign(w), Psi_D(w)


def phi_D(g: UniTriGraph | MarkedKey) -> tuple[int, DsepElement]:
    """Inverse of ``psi_D``; graphs outside the image are reached through AS flips."""
    key = g if isinstance(g, (MarkedKey, TreeKey)) else canonical_encode(g)
    if not isinstance(key, MarkedKey):
        raise ValueError("phi_D expects a marked graph")
    n, m, first, second, o = key
    sign = 1 if o == MARK_K_ORIENTATION else -1
    p = m + 1
    term = Bracket(_planar_to_bracket(first, m), _planar_to_bracket(second, m))
    w = DsepElement.from_term(term, p)
    if w.k != n:
        raise ValueError("marks do not match the doubled label")
    return sign * _dsep_sign(w), w


# -- the combinatorial differential ------------------------------------------


def to_shapes(vec: Mapping) -> dict:
    """Rewrite a vector over oriented keys in terms of AS shapes."""
    out: dict = {}
    for k, c in vec.items():
        s, sh = shape_of(k)
        out[sh] = out.get(sh, 0) + s * c
    return {k: v for k, v in out.items() if v}


def _stu_difference(g: UniTriGraph, a: int, b: int) -> dict[TreeKey, int]:
    out: dict[TreeKey, int] = {}
    for label, sgn in ((a, 1), (b, -1)):
        g1, g2 = g.stu(label)
        for h, c in ((g1, 1), (g2, -1)):
            k = canonical_encode(h)
            out[k] = out.get(k, 0) + sgn * c
    return {k: v for k, v in out.items() if v}


def d1_combinatorial(g: UniTriGraph | MarkedKey) -> dict[TreeKey, int]:
    """``STU_(p-1)(g) - STU_k(g)`` for a ``(k, p-1)``-marked graph, over oriented trees."""
    if isinstance(g, MarkedKey):
        g = decode(g)
    if g.marks is None:
        raise ValueError("d1_combinatorial needs a marked graph")
    k, top = g.marks
    if top != g.leaf_count or k >= top:
        raise ValueError("marks must be (k, p-1) with p-1 the largest label")
    if top + 1 < 4:
        raise ValueError("p must be at least 4")
    return _stu_difference(g, top, k)


def stu2_vectors(leaves: int, shapes: bool = True) -> list[dict[TreeKey, int]]:
    """``STU_n(G) - STU_m(G)`` for every one-loop graph with ``leaves`` leaves and every admissible pair.

    With ``shapes`` one graph per AS class is used, which suffices modulo AS.
    """
    out = []
    for key in marked_keys(leaves, shapes=shapes):
        out.append(_stu_difference(decode(key), key.n, key.m))
    return out


def ihx_basis(degree: int):
    """Hermite basis of the IHX span on AS shapes of the given degree."""
    shapes = tree_keys(degree, shapes=True)
    index = {k: i for i, k in enumerate(shapes)}
    rows = []
    for vec in relation_vectors(shapes, "IHX", modulo_as=True):
        row = [0] * len(shapes)
        for k, c in vec.coeffs:
            row[index[k]] += c
        rows.append(row)
    return shapes, index, rows


def _dense(vec: Mapping[TreeKey, int], index: Mapping[TreeKey, int]) -> list[int]:
    row = [0] * len(index)
    for k, c in to_shapes(vec).items():
        row[index[k]] += c
    return row


@dataclass(frozen=True)
class E2Result:
    p: int
    group: GroupPresentation
    d1_rank: int
    certificate: dict

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e2": self.group.describe(),
            "e2_free_rank": self.group.free_rank,
            "e2_invariant_factors": list(self.group.invariant_factors),
            "d1_matrix_rank": self.d1_rank,
            "certificates": self.certificate,
        }


def e2_diagonal(p: int, with_certificate: bool = True) -> E2Result:
    """``E^2_{p,p}``: trees of degree ``p-1`` modulo AS, IHX and the image of d^1."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p <= 2:
        return E2Result(p, GroupPresentation(0, IntMatrix([], 0), (), 0), 0, {"reason": "E1_{p,p} vanishes or d1 is onto"})
    if p == 3:
        grp = GroupPresentation(1, IntMatrix([], 1), (), 1)
        return E2Result(p, grp, 0, {"reason": "d1 into E1_{3,3} is zero; E1_{3,3} = T_2 = Z"})
    shapes, index, ihx = ihx_basis(p - 1)
    d1_rows = [_dense(d1_combinatorial(k), index) for k in marked_keys(p - 1, [(k, p - 1) for k in range(1, p - 1)], shapes=True)]
    grp = GroupPresentation.from_relations(
        [{j: v for j, v in enumerate(r) if v} for r in ihx + d1_rows], len(shapes)
    )
    base = rank(ihx) if ihx else 0
    d1_rank = (rank(ihx + d1_rows) if d1_rows else base) - base
    cert: dict = {"generators": len(shapes), "ihx_relations": len(ihx), "d1_columns": len(d1_rows)}
    if with_certificate:
        stu_rows = [_dense(v, index) for v in stu2_vectors(p - 1)]
        lhs, rhs = ihx + d1_rows, ihx + stu_rows
        h_l = hermite_normal_form(lhs, len(shapes))
        h_r = hermite_normal_form(rhs, len(shapes))
        cert.update(
            {
                "stu2_relations": len(stu_rows),
                "image_in_stu2_span": all(in_lattice(r, h_r) for r in d1_rows),
                "stu2_span_in_image": all(in_lattice(r, h_l) for r in stu_rows),
                "image_equals_stu2_span": h_l == h_r,
            }
        )
    return E2Result(p, grp, d1_rank, cert)
