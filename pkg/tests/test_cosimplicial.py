import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotspec.brackets import Bracket, LinComb, br, expand_bilinear, support, x, y
from knotspec.cosimplicial import (
    SimplicialDirection,
    codegeneracy,
    codegeneracy_push,
    coface,
    coface_push,
    level_of,
    push_combo,
    push_through_bracket,
)


def gens(level):
    return [x(i, j) for j in range(2, level + 1) for i in range(1, j)] + [y(k) for k in range(1, level + 1)]


def L(*pairs):
    return LinComb(pairs)


def test_codegeneracy_examples():
    assert not codegeneracy_push(0, x(1, 2), 1)
    assert codegeneracy_push(0, x(2, 3), 2) == LinComb.of(x(1, 2))
    assert codegeneracy_push(1, x(1, 3), 2) == LinComb.of(x(1, 2))
    assert codegeneracy_push(2, x(1, 2), 2) == LinComb.of(x(1, 2))
    assert not codegeneracy_push(0, y(1), 1)
    assert codegeneracy_push(0, y(2), 1) == LinComb.of(y(1))


def test_coface_examples():
    assert coface_push(0, x(1, 2), 2) == LinComb.of(x(2, 3))
    assert coface_push(1, x(1, 2), 2) == L((x(1, 3), 1), (x(2, 3), 1))
    assert coface_push(2, x(1, 2), 2) == L((x(1, 2), 1), (x(1, 3), 1))
    assert coface_push(3, x(1, 2), 2) == LinComb.of(x(1, 2))
    assert coface_push(1, y(1), 1) == L((x(1, 2), 1), (y(1), 1), (y(2), 1))


def test_index_validation():
    with pytest.raises(ValueError):
        coface(3, 1)
    with pytest.raises(ValueError):
        codegeneracy(2, 1)
    with pytest.raises(ValueError):
        SimplicialDirection("face", 0, 1)
    with pytest.raises(ValueError):
        coface_push(0, x(1, 4), 2)
    with pytest.raises(ValueError):
        push_through_bracket(coface(0, 2), br(x(1, 3), x(2, 4)))


def test_direction_levels():
    assert coface(1, 3).target_level == 4
    assert codegeneracy(1, 3).source_level == 4
    assert codegeneracy(1, 3).target_level == 3


def _apply(ops, c):
    for op in ops:
        c = push_combo(op, c)
    return c


@pytest.mark.parametrize("level", range(1, 7))
def test_coface_coface(level):
    # delta^j delta^i = delta^i delta^(j-1) for i < j
    for g in gens(level):
        c = LinComb.of(g)
        for j in range(level + 3):
            for i in range(j):
                lhs = _apply([coface(i, level), coface(j, level + 1)], c)
                rhs = _apply([coface(j - 1, level), coface(i, level + 1)], c)
                assert lhs == rhs, (g, i, j)


@pytest.mark.parametrize("level", range(2, 8))
def test_codegeneracy_codegeneracy(level):
    # s^j s^i = s^i s^(j+1) for i <= j, from level down two steps
    for g in gens(level):
        c = LinComb.of(g)
        for j in range(level - 1):
            for i in range(j + 1):
                lhs = _apply([codegeneracy(i, level - 1), codegeneracy(j, level - 2)], c)
                rhs = _apply([codegeneracy(j + 1, level - 1), codegeneracy(i, level - 2)], c)
                assert lhs == rhs, (g, i, j)


@pytest.mark.parametrize("level", range(1, 8))
def test_codegeneracy_after_coface(level):
    for g in gens(level):
        c = LinComb.of(g)
        for i in range(level + 2):
            up = push_combo(coface(i, level), c)
            for j in range(level + 1):
                lhs = push_combo(codegeneracy(j, level), up)
                if i in (j, j + 1):
                    assert lhs == c
                elif i < j:
                    assert lhs == _apply([codegeneracy(j - 1, level - 1), coface(i, level - 1)], c)
                else:
                    assert lhs == _apply([codegeneracy(j, level - 1), coface(i - 1, level - 1)], c)


@pytest.mark.parametrize("level", range(1, 7))
def test_codegeneracy_respects_product_factors(level):
    # configuration classes go to configuration classes, tangent classes to tangent classes
    for l in range(level):
        for g in gens(level + 1):
            for h in codegeneracy_push(l, g, level):
                assert h.kind == g.kind


def test_bracket_examples():
    assert not push_through_bracket(codegeneracy(0, 2), br(x(1, 3), x(2, 3)))
    c = br(br(x(1, 4), x(2, 4)), x(3, 4))
    assert push_through_bracket(coface(5, 4), c) == LinComb.of(c)
    # multilinear: every cross term has disjoint strand support
    lifted = br(br(x(1, 5), x(2, 5)), x(3, 5))
    assert push_through_bracket(coface(4, 4), c) == L((c, 1), (lifted, 1))


def test_repeated_label_keeps_cross_terms():
    c = br(br(x(1, 3), x(2, 3)), x(1, 3))
    out = push_through_bracket(coface(3, 3), c)
    assert br(br(x(1, 3), x(2, 3)), x(1, 4)) in out
    assert len(out) == 4


def test_mixed_factor_brackets_vanish():
    assert not push_through_bracket(coface(0, 2), br(x(1, 2), y(1)))
    assert not push_through_bracket(coface(0, 2), br(y(1), y(2)))
    assert push_through_bracket(coface(0, 2), br(y(1), y(1))) == LinComb.of(br(y(2), y(2)))


def test_level_of():
    assert level_of(br(x(1, 3), y(4))) == 4


leaf = st.sampled_from([x(1, 3), x(2, 3), x(1, 2)])
small_terms = st.recursive(leaf, lambda t: st.builds(Bracket, t, t), max_leaves=4)


@settings(max_examples=150, deadline=None)
@given(small_terms, small_terms, st.integers(0, 4))
def test_push_is_bilinear(a, b, l):
    d = coface(l, 3)
    top = push_through_bracket(d, br(a, b))
    pa, pb = push_through_bracket(d, a), push_through_bracket(d, b)
    expanded = expand_bilinear((pa, pb))
    kept = LinComb((t, c) for t, c in expanded.items() if support(t.left) & support(t.right))
    assert top == kept
    s = LinComb([(a, 2), (b, -1)])
    assert push_combo(d, s) == pa * 2 - pb
