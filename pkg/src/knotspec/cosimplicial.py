"""Coface and codegeneracy pushforwards on ``pi_2`` generators, extended to brackets.

Level ``n`` of the cosimplicial model has the homotopy type of
``Conf(n, R^3) x (S^2)^n``, so its ``pi_2`` generators are ``x(i,j)`` with
``j <= n`` and ``y(k)`` with ``k <= n``.

* ``delta^l`` goes from level ``n`` to ``n + 1`` (``0 <= l <= n + 1``);
* ``s^l`` goes from level ``n + 1`` to ``n`` (``0 <= l <= n``).

Both are extended to brackets by naturality of the Whitehead product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .brackets import Bracket, Gen, LinComb, Term, expand_leafwise, leaves, support, x, y

__all__ = [
    "SimplicialDirection",
    "coface",
    "codegeneracy",
    "codegeneracy_push",
    "coface_push",
    "push_through_bracket",
    "push_combo",
    "level_of",
]

CODEGENERACY = "codegeneracy"
COFACE = "coface"


@dataclass(frozen=True)
class SimplicialDirection:
    """A coface or codegeneracy with its index ``l`` and the level it starts from."""

    kind: str
    l: int
    source_level: int

    def __post_init__(self) -> None:
        n = self.source_level
        if self.kind == CODEGENERACY:
            if n < 1 or not 0 <= self.l <= n - 1:
                raise ValueError(f"s^{self.l} is not defined on level {n}")
        elif self.kind == COFACE:
            if n < 0 or not 0 <= self.l <= n + 1:
                raise ValueError(f"delta^{self.l} is not defined on level {n}")
        else:
            raise ValueError(f"unknown direction kind {self.kind!r}")

    @property
    def target_level(self) -> int:
        return self.source_level + (1 if self.kind == COFACE else -1)

    def push(self, g: Gen) -> LinComb:
        if self.kind == COFACE:
            return coface_push(self.l, g, self.source_level)
        return codegeneracy_push(self.l, g, self.source_level - 1)

    def __str__(self) -> str:
        sym = "delta" if self.kind == COFACE else "s"
        return f"{sym}^{self.l}@{self.source_level}"


def coface(l: int, n: int) -> SimplicialDirection:
    return SimplicialDirection(COFACE, l, n)


def codegeneracy(l: int, n: int) -> SimplicialDirection:
    """``s^l`` from level ``n + 1`` down to level ``n``."""
    return SimplicialDirection(CODEGENERACY, l, n + 1)


def _check_gen(g: Gen, level: int) -> None:
    top = g.j if g.kind == "x" else g.i
    if top > level:
        raise ValueError(f"{g} does not live at level {level}")


def codegeneracy_push(l: int, g: Gen, n: int) -> LinComb:
    """``s^l_*(g)`` for ``g`` at level ``n + 1``; the result lives at level ``n``."""
    if not 0 <= l <= n:
        raise ValueError(f"s^{l} needs 0 <= l <= {n}")
    _check_gen(g, n + 1)
    if g.kind == "x":
        i, j = g.i, g.j
        if l < i - 1:
            return LinComb.of(x(i - 1, j - 1))
        if i - 1 < l < j - 1:
            return LinComb.of(x(i, j - 1))
        if l > j - 1:
            return LinComb.of(g)
        return LinComb()
    k = g.i
    if k == l + 1:
        return LinComb()
    return LinComb.of(y(k - 1) if k > l + 1 else g)


def coface_push(l: int, g: Gen, n: int) -> LinComb:
    """``delta^l_*(g)`` for ``g`` at level ``n``; the result lives at level ``n + 1``."""
    if not 0 <= l <= n + 1:
        raise ValueError(f"delta^{l} needs 0 <= l <= {n + 1}")
    _check_gen(g, n)
    if g.kind == "x":
        i, j = g.i, g.j
        if l < i:
            return LinComb.of(x(i + 1, j + 1))
        if l == i:
            return LinComb([(x(i, j + 1), 1), (x(i + 1, j + 1), 1)])
        if l < j:
            return LinComb.of(x(i, j + 1))
        if l == j:
            return LinComb([(x(i, j), 1), (x(i, j + 1), 1)])
        return LinComb.of(g)
    k = g.i
    if l < k:
        return LinComb.of(y(k + 1))
    if l == k:
        return LinComb([(x(k, k + 1), 1), (y(k), 1), (y(k + 1), 1)])
    return LinComb.of(g)


def _factor(t: Term):
    """Which product factor a (non-vanishing) term lives in: ``"conf"`` or a tangent index."""
    g = t
    while isinstance(g, Bracket):
        g = g.left
    return "conf" if g.kind == "x" else g.i


def _node_vanishes(a: Term, b: Term) -> bool:
    fa, fb = _factor(a), _factor(b)
    if fa != fb:
        return True
    if fa == "conf":
        return not (support(a) & support(b))
    return False


def level_of(t: Term) -> int:
    """Smallest level at which every leaf of ``t`` lives."""
    return max(g.j if g.kind == "x" else g.i for g in leaves(t))


def push_through_bracket(direction: SimplicialDirection, t: Term) -> LinComb:
    """Push ``t`` along ``direction`` leaf by leaf, dropping vanishing brackets.

    A bracket node vanishes when its two sides live in different product
    factors or are configuration classes with disjoint strand supports.
    Identical terms cancel; no Hall normalisation is applied.
    """
    if level_of(t) > direction.source_level:
        raise ValueError(f"{t} does not live at level {direction.source_level}")
    return expand_leafwise(t, direction.push, _node_vanishes)


def push_combo(direction: SimplicialDirection, c) -> LinComb:
    out = LinComb()
    for t, k in c.items():
        out.iadd(push_through_bracket(direction, t), k)
    return out
