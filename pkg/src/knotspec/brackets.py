"""Graded bracket algebra for Whitehead products of two-sphere classes.

Terms are binary trees whose leaves are generators: ``x(i,j)`` (a class in
``pi_2`` of a configuration space, ``i < j``) or ``y(k)`` (the fundamental
class of the ``k``-th tangent two-sphere).  A bracket of weight ``w`` lives in
``pi_{w+1}``, so its graded degree is ``w``; with that convention

* antisymmetry reads ``[a, b] = (-1)^((|a|+1)(|b|+1)) [b, a]``;
* the Jacobi identity reads
  ``(-1)^(|c|(|a|+1)) [a,[b,c]] + (-1)^(|a|(|b|+1)) [b,[c,a]]
  + (-1)^(|b|(|c|+1)) [c,[a,b]] = 0``.

Hall basic products use the order "by weight, then lexicographically", with
generators ordered ``x(i,j)`` by ``(j, i)`` followed by ``y(k)`` by ``k``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Union

__all__ = [
    "Gen",
    "Bracket",
    "Term",
    "LinComb",
    "x",
    "y",
    "br",
    "swap_sign",
    "jacobi_signs",
    "jacobi_relation",
    "expand_bilinear",
    "expand_leafwise",
    "normalize_to_hall",
    "normalize_combo",
    "is_basic",
    "enumerate_basic_products",
    "hall_key",
    "leaves",
    "support",
    "multidegree",
    "parse_term",
    "parse_combo",
    "render",
]


@dataclass(frozen=True)
class Gen:
    """A weight-one generator: ``kind == "x"`` uses ``(i, j)``, ``kind == "y"`` uses ``i`` only."""

    kind: str
    i: int
    j: int = 0

    def __post_init__(self) -> None:
        if self.kind == "x":
            if not 1 <= self.i < self.j:
                raise ValueError(f"x({self.i},{self.j}) needs 1 <= i < j")
        elif self.kind == "y":
            if self.i < 1 or self.j != 0:
                raise ValueError(f"bad tangent index {self.i}")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    weight = 1

    @property
    def key(self) -> tuple:
        return (1, 0, self.j, self.i) if self.kind == "x" else (1, 1, self.i)

    @property
    def is_config(self) -> bool:
        return self.kind == "x"

    def __str__(self) -> str:
        return f"x({self.i},{self.j})" if self.kind == "x" else f"y({self.i})"

    def __repr__(self) -> str:
        return str(self)


@dataclass(frozen=True, eq=False)
class Bracket:
    left: "Term"
    right: "Term"
    weight: int = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.left, (Gen, Bracket)) or not isinstance(self.right, (Gen, Bracket)):
            raise TypeError("bracket arguments must be terms")
        object.__setattr__(self, "weight", self.left.weight + self.right.weight)
        object.__setattr__(self, "_hash", hash((self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Bracket):
            return False
        return self._hash == other._hash and self.left == other.left and self.right == other.right

    @property
    def key(self) -> tuple:
        return _bracket_key(self)

    def __str__(self) -> str:
        return f"[{self.left},{self.right}]"

    def __repr__(self) -> str:
        return str(self)


Term = Union[Gen, Bracket]


@lru_cache(maxsize=None)
def _bracket_key(b: Bracket) -> tuple:
    return (b.weight, b.left.key, b.right.key)


def hall_key(t: Term) -> tuple:
    """Sort key realising the Hall order."""
    return t.key


def x(i: int, j: int) -> Gen:
    return Gen("x", i, j)


def y(k: int) -> Gen:
    return Gen("y", k)


def br(a: Term, b: Term) -> Bracket:
    return Bracket(a, b)


def leaves(t: Term) -> list[Gen]:
    if isinstance(t, Gen):
        return [t]
    return leaves(t.left) + leaves(t.right)


@lru_cache(maxsize=None)
def support(t: Term) -> frozenset[int]:
    """Strand indices touched by the configuration leaves of ``t``."""
    if isinstance(t, Gen):
        return frozenset((t.i, t.j)) if t.kind == "x" else frozenset()
    return support(t.left) | support(t.right)


def multidegree(t: Term) -> Counter:
    return Counter(leaves(t))


def render(t: Term) -> str:
    return str(t)


# -- linear combinations ---------------------------------------------------


class LinComb(dict):
    """Finite integer combination of terms.  Zero coefficients are never stored."""

    def __init__(self, items: Mapping[Term, int] | Iterable[tuple[Term, int]] = ()):
        super().__init__()
        pairs = items.items() if isinstance(items, Mapping) else items
        for t, c in pairs:
            self.add(t, c)

    @classmethod
    def of(cls, t: Term, c: int = 1) -> LinComb:
        return cls([(t, c)])

    def add(self, t: Term, c: int = 1) -> LinComb:
        if c:
            v = self.get(t, 0) + c
            if v:
                self[t] = v
            else:
                del self[t]
        return self

    def iadd(self, other: Mapping[Term, int], scale: int = 1) -> LinComb:
        for t, c in other.items():
            self.add(t, scale * c)
        return self

    def __add__(self, other: Mapping[Term, int]) -> LinComb:
        return LinComb(self).iadd(other)

    def __sub__(self, other: Mapping[Term, int]) -> LinComb:
        return LinComb(self).iadd(other, -1)

    def __neg__(self) -> LinComb:
        return LinComb((t, -c) for t, c in self.items())

    def __mul__(self, k: int) -> LinComb:
        return LinComb((t, k * c) for t, c in self.items())

    __rmul__ = __mul__

    def terms(self) -> list[Term]:
        return sorted(self, key=hall_key)

    def render(self) -> str:
        if not self:
            return "0"
        out = []
        for n, t in enumerate(self.terms()):
            c = self[t]
            sign = "-" if c < 0 else ("+" if n else "")
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out.append(f"{sign} {mag}{t}".strip() if n else f"{sign}{mag}{t}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"LinComb({self.render()})"


# -- graded signs ----------------------------------------------------------


def swap_sign(w1: int, w2: int) -> int:
    """Sign in ``[a, b] = swap_sign(|a|, |b|) [b, a]``."""
    return -1 if (w1 + 1) * (w2 + 1) % 2 else 1


def jacobi_signs(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Coefficients of ``[a,[b,c]]``, ``[b,[c,a]]``, ``[c,[a,b]]`` in the Jacobi identity."""

    def s(e: int) -> int:
        return -1 if e % 2 else 1

    return s(c * (a + 1)), s(a * (b + 1)), s(b * (c + 1))


def jacobi_relation(u: Term, v: Term, w: Term) -> LinComb:
    """The (vanishing) graded Jacobi combination of three terms, unnormalised."""
    ea, eb, ec = jacobi_signs(u.weight, v.weight, w.weight)
    return LinComb(
        [(Bracket(u, Bracket(v, w)), ea), (Bracket(v, Bracket(w, u)), eb), (Bracket(w, Bracket(u, v)), ec)]
    )


# -- bilinear expansion ------------------------------------------------------

Expr = Union[Term, Mapping, tuple]


def expand_bilinear(expr: Expr) -> LinComb:
    """Expand a nested bracket of linear combinations into raw bracket terms.

    ``expr`` is a term, a ``LinComb``/mapping, or a pair ``(a, b)`` of
    expressions standing for their bracket.  No normalisation happens.
    """
    if isinstance(expr, (Gen, Bracket)):
        return LinComb.of(expr)
    if isinstance(expr, Mapping):
        return LinComb(expr)
    if isinstance(expr, tuple) and len(expr) == 2:
        a, b = expand_bilinear(expr[0]), expand_bilinear(expr[1])
        out = LinComb()
        for (s, cs), (t, ct) in product(a.items(), b.items()):
            out.add(Bracket(s, t), cs * ct)
        return out
    raise TypeError(f"cannot expand {expr!r}")


def expand_leafwise(
    t: Term,
    f: Callable[[Gen], Mapping[Term, int]],
    vanish: Callable[[Term, Term], bool] | None = None,
) -> LinComb:
    """Replace every leaf ``g`` of ``t`` by ``f(g)`` and expand bilinearly.

    ``vanish(a, b)`` may declare a bracket node zero; such terms are dropped
    as soon as they appear.
    """
    if isinstance(t, Gen):
        return LinComb(f(t))
    a = expand_leafwise(t.left, f, vanish)
    b = expand_leafwise(t.right, f, vanish)
    out = LinComb()
    for s, cs in a.items():
        for u, cu in b.items():
            if vanish is not None and vanish(s, u):
                continue
            out.add(Bracket(s, u), cs * cu)
    return out


# -- Hall normal form --------------------------------------------------------


def _is_square(t: Term) -> bool:
    return isinstance(t, Bracket) and t.left == t.right and isinstance(t.left, Gen)


def is_basic(t: Term) -> bool:
    """Whether ``t`` is a Hall basic product."""
    if isinstance(t, Gen):
        return True
    a, b = t.left, t.right
    if not (is_basic(a) and is_basic(b) and a.key < b.key):
        return False
    return isinstance(b, Gen) or b.left.key <= a.key


@lru_cache(maxsize=None)
def _hall_bracket(u: Term, v: Term) -> tuple[tuple[Term, int], ...]:
    """``[u, v]`` for Hall-normal ``u``, ``v`` (weight-one squares allowed) as Hall terms."""
    out = LinComb()
    if u == v:
        if isinstance(u, Gen):
            return ((Bracket(u, u), 1),)
        if u.weight % 2 == 0:
            raise ValueError(f"[{u},{u}] is 2-torsion; not representable")
        raise ValueError(f"square of a composite term {u} is not supported")
    if _is_square(u) or _is_square(v):
        if _is_square(u) and _is_square(v):
            raise ValueError("bracket of two squares is not supported")
        if _is_square(u):
            s = swap_sign(u.weight, v.weight)
            return tuple((t, s * c) for t, c in _hall_bracket(v, u))
        z, g = u, v.left
        if z == g:
            # quasi-Lie axiom: [g,[g,g]] = 0
            return ()
        # [z,[g,g]] = 2 (-1)^|z| [g,[g,z]]
        coef = 2 * (-1 if z.weight % 2 else 1)
        for h, ch in _hall_bracket(g, z):
            for t, ct in _hall_bracket(g, h):
                out.add(t, coef * ch * ct)
        return tuple(out.items())
    if u.key > v.key:
        s = swap_sign(u.weight, v.weight)
        return tuple((t, s * c) for t, c in _hall_bracket(v, u))
    if isinstance(v, Gen) or v.left.key <= u.key:
        return ((Bracket(u, v), 1),)
    # u < c: rewrite [u,[c,d]] through Jacobi
    c, d = v.left, v.right
    ea, eb, ec = jacobi_signs(u.weight, c.weight, d.weight)
    # ea [u,[c,d]] = -eb [c,[d,u]] - ec [d,[u,c]]
    for first, inner_a, inner_b, coef in ((c, d, u, -eb * ea), (d, u, c, -ec * ea)):
        for h, ch in _hall_bracket(inner_a, inner_b):
            for t, ct in _hall_bracket(first, h):
                out.add(t, coef * ch * ct)
    return tuple(out.items())


def _normalize(t: Term) -> LinComb:
    if isinstance(t, Gen):
        return LinComb.of(t)
    a, b = _normalize(t.left), _normalize(t.right)
    out = LinComb()
    for s, cs in a.items():
        for u, cu in b.items():
            for h, ch in _hall_bracket(s, u):
                out.add(h, cs * cu * ch)
    return out


def normalize_to_hall(t: Term, generators: Iterable[Gen] | None = None) -> LinComb:
    """Rewrite ``t`` as an integer combination of Hall basic products.

    The weight-one square ``[g, g]`` is kept as a formal element, since it is
    not a basic product but is nonzero.  ``generators``, when given, is the
    allowed alphabet.
    """
    if generators is not None:
        allowed = set(generators)
        for g in leaves(t):
            if g not in allowed:
                raise ValueError(f"unknown generator {g}")
    return _normalize(t)


def normalize_combo(c: Mapping[Term, int]) -> LinComb:
    out = LinComb()
    for t, k in c.items():
        out.iadd(_normalize(t), k)
    return out


def enumerate_basic_products(
    gens: Iterable[Gen],
    max_weight: int,
    multidegree: Callable[[Counter], bool] | None = None,
    bound: Mapping[Gen, int] | None = None,
) -> list[Term]:
    """Hall basic products over ``gens`` up to ``max_weight``, in Hall order.

    ``bound`` caps how often each generator may occur (used for pruning);
    ``multidegree`` filters the final list by its multidegree ``Counter``.
    """
    alphabet = sorted(set(gens), key=hall_key)
    by_weight: dict[int, list[tuple[Term, Counter]]] = {}

    def fits(md: Counter) -> bool:
        return bound is None or all(md[g] <= bound.get(g, 0) for g in md)

    by_weight[1] = [(g, Counter([g])) for g in alphabet if fits(Counter([g]))]
    for w in range(2, max_weight + 1):
        level = []
        for wa in range(1, w):
            wb = w - wa
            for a, ma in by_weight.get(wa, ()):
                for b, mb in by_weight.get(wb, ()):
                    if not a.key < b.key:
                        continue
                    if isinstance(b, Bracket) and not b.left.key <= a.key:
                        continue
                    md = ma + mb
                    if fits(md):
                        level.append((Bracket(a, b), md))
        level.sort(key=lambda p: p[0].key)
        by_weight[w] = level
    out = []
    for w in range(1, max_weight + 1):
        for t, md in by_weight.get(w, ()):
            if multidegree is None or multidegree(md):
                out.append(t)
    return out


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x)\((\d+),(\d+)\)|(y)\((\d+)\)|(x)(\d)(\d)|(y)(\d)|(\[)|(\])|(,))")


def _tokens(s: str) -> Iterator[tuple]:
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse term near {s[pos:]!r}")
        pos = m.end()
        g = m.groups()
        if g[0]:
            yield ("gen", x(int(g[1]), int(g[2])))
        elif g[3]:
            yield ("gen", y(int(g[4])))
        elif g[5]:
            yield ("gen", x(int(g[6]), int(g[7])))
        elif g[8]:
            yield ("gen", y(int(g[9])))
        else:
            yield (next(v for v in g[10:] if v), None)


def parse_term(s: str) -> Term:
    """Parse ``[x(1,3),[x(1,3),x(2,3)]]``; the shorthand ``x13``/``y1`` is accepted too."""
    toks = list(_tokens(s))
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of term")
        kind, val = toks[pos]
        pos += 1
        if kind == "gen":
            return val
        if kind != "[":
            raise ValueError(f"unexpected {kind!r}")
        a = parse()
        if pos >= len(toks) or toks[pos][0] != ",":
            raise ValueError("expected ','")
        pos += 1
        b = parse()
        if pos >= len(toks) or toks[pos][0] != "]":
            raise ValueError("expected ']'")
        pos += 1
        return Bracket(a, b)

    t = parse()
    if pos != len(toks):
        raise ValueError("trailing input after term")
    return t


_COEF = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*")


def parse_combo(s: str) -> LinComb:
    """Parse a signed sum such as ``x(2,3) - 2*[x(1,3),x(2,3)]``."""
    s = s.strip()
    if s == "0":
        return LinComb()
    out = LinComb()
    pos = 0
    while pos < len(s):
        m = _COEF.match(s, pos)
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        pos = m.end()
        depth, start = 0, pos
        while pos < len(s):
            ch = s[pos]
            if ch == "[" or ch == "(":
                depth += 1
            elif ch == "]" or ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0 and pos > start:
                break
            pos += 1
        out.add(parse_term(s[start:pos]), sign * coef)
    return out
