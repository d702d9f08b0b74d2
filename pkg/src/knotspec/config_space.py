"""Homotopy of configuration spaces of points in R^3.

``pi_2(Conf(n, R^3))`` is free on ``x(i,j)`` (``i < j <= n``), with the
orientation rule ``x(j,i) = -x(i,j)``.  Brackets of generators with
disjoint strand support vanish, and the three-term relation on a pair sharing
one index rewrites ``[x(i,s), x(s,k)]`` three ways.
"""

from __future__ import annotations

from dataclasses import dataclass

from .brackets import Bracket, Gen, Term, enumerate_basic_products, leaves, support, x

__all__ = [
    "orient_normalize",
    "disjoint_support_vanishes",
    "triple_rewrite",
    "SphereSummand",
    "sphere_group",
    "pi_decomposition",
]


def orient_normalize(i: int, j: int, n: int | None = None) -> tuple[Gen, int]:
    """Canonical generator for the ordered pair ``(i, j)`` and its sign (``x(j,i) = -x(i,j)``)."""
    if i == j:
        raise ValueError(f"x({i},{j}) has a repeated index")
    lo, hi = (i, j) if i < j else (j, i)
    if lo < 1 or (n is not None and hi > n):
        raise ValueError(f"index out of range in x({i},{j})")
    return x(lo, hi), (1 if i < j else -1)


def disjoint_support_vanishes(t: Term) -> bool:
    """True when some bracket node of ``t`` has children with disjoint supports."""
    if isinstance(t, Gen):
        return False
    for g in leaves(t):
        if not g.is_config:
            raise ValueError("disjoint_support_vanishes expects configuration leaves only")
    return _vanishes(t)


def _vanishes(t: Term) -> bool:
    if isinstance(t, Gen):
        return False
    if not (support(t.left) & support(t.right)):
        return True
    return _vanishes(t.left) or _vanishes(t.right)


def triple_rewrite(t: Bracket) -> list[tuple[int, Bracket]]:
    """The three equal forms of ``[x(i,s), x(s,k)]`` as ``(sign, term)`` pairs.

    Every returned ``sign * term`` equals ``t``; the first entry is ``t``.
    """
    a, b = t.left, t.right
    if not (isinstance(a, Gen) and isinstance(b, Gen) and a.is_config and b.is_config):
        raise ValueError("triple_rewrite needs a bracket of two configuration generators")
    shared = {a.i, a.j} & {b.i, b.j}
    if len(shared) != 1:
        raise ValueError(f"{t} must share exactly one index")
    (s,) = shared
    (i,) = {a.i, a.j} - shared
    (k,) = {b.i, b.j} - shared

    def form(p: tuple[int, int], q: tuple[int, int]) -> tuple[int, Bracket]:
        g, e = orient_normalize(*p)
        h, f = orient_normalize(*q)
        return e * f, Bracket(g, h)

    # [x(i,s), x(s,k)] = [x(s,i), x(i,k)] = [x(i,k), x(k,s)]
    s0, _ = form((i, s), (s, k))
    forms = [(1, t)]
    for p, q in (((s, i), (i, k)), ((i, k), (k, s))):
        e, term = form(p, q)
        forms.append((e * s0, term))
    return forms


@dataclass(frozen=True)
class SphereSummand:
    """A summand ``pi_q(S^(w+1))`` indexed by the basic product ``index``."""

    index: Term
    q: int
    sphere_dim: int

    @property
    def group(self) -> str:
        return sphere_group(self.q, self.sphere_dim)


def sphere_group(q: int, m: int) -> str:
    """``pi_q(S^m)`` where known: ``Z`` at ``q == m``, ``Z`` for ``pi_3(S^2)``,
    ``Z/2`` in the first stable stem.  Anything else stays symbolic."""
    if q < m:
        return "0"
    if q == m:
        return "Z"
    if q == m + 1:
        if m == 2:
            return "Z"
        if m >= 3:
            return "Z/2"
    if m == 1:
        return "0"
    return f"pi_{q}(S^{m})"


def pi_decomposition(n: int, q: int) -> list[SphereSummand]:
    """Hilton-Milnor summands of ``pi_q(Conf(n, R^3))``.

    The space splits (after looping) as a product of wedges of ``k`` two-spheres
    for ``k = 1, ..., n-1`` with generators ``x(1,k+1), ..., x(k,k+1)``.  Each
    basic product of weight ``w <= q - 1`` over one wedge contributes
    ``pi_q(S^(w+1))``.
    """
    if n < 2 or q < 2:
        raise ValueError("need n >= 2 and q >= 2")
    out = []
    for k in range(1, n):
        gens = [x(i, k + 1) for i in range(1, k + 1)]
        for t in enumerate_basic_products(gens, q - 1):
            out.append(SphereSummand(t, q, t.weight + 1))
    return out
