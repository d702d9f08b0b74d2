import pytest
from hypothesis import given, reject, settings
from hypothesis import strategies as st

from knotspec.brackets import (
    Bracket,
    LinComb,
    br,
    enumerate_basic_products,
    expand_bilinear,
    is_basic,
    jacobi_relation,
    jacobi_signs,
    normalize_combo,
    normalize_to_hall,
    parse_combo,
    parse_term,
    swap_sign,
    x,
    y,
)
from oracles import tensor_image, tensor_of_combo

ALPHABET = [x(1, 2), x(1, 3), x(2, 3), y(1), y(2)]


def terms(alphabet=ALPHABET, max_leaves=5):
    return st.recursive(
        st.sampled_from(alphabet),
        lambda inner: st.builds(Bracket, inner, inner),
        max_leaves=max_leaves,
    )


def _witt(n, w):
    def mobius(k):
        out, m, d = 1, k, 2
        while d * d <= m:
            if m % d == 0:
                m //= d
                if m % d == 0:
                    return 0
                out = -out
            d += 1
        return -out if m > 1 else out

    return sum(mobius(d) * n ** (w // d) for d in range(1, w + 1) if w % d == 0) // w


def test_swap_sign_table():
    # degree = weight; odd total of (w+1)(w+1) flips the sign
    assert swap_sign(1, 1) == 1
    assert swap_sign(1, 2) == 1
    assert swap_sign(2, 2) == -1
    assert swap_sign(2, 4) == -1
    assert swap_sign(3, 1) == 1


def test_jacobi_signs_weight_one():
    assert jacobi_signs(1, 1, 1) == (1, 1, 1)
    assert jacobi_signs(2, 1, 1) == (-1, 1, 1)
    assert jacobi_signs(1, 2, 1) == (1, -1, 1)


def test_weight_one_square_is_kept():
    t = br(x(1, 2), x(1, 2))
    assert normalize_to_hall(t) == LinComb.of(t)
    assert not is_basic(t)


def test_quasi_lie_cube_vanishes():
    g = x(1, 3)
    assert not normalize_to_hall(br(g, br(g, g)))


def test_antisymmetry_normalises():
    a, b = x(1, 3), x(2, 3)
    assert normalize_to_hall(br(b, a)) == LinComb.of(br(a, b), swap_sign(1, 1))


@pytest.mark.parametrize("n,w", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4), (4, 3)])
def test_basic_product_count_is_witt(n, w):
    gens = [x(i, n + 1) for i in range(1, n + 1)]
    got = [t for t in enumerate_basic_products(gens, w) if t.weight == w]
    assert len(got) == _witt(n, w)
    assert all(is_basic(t) for t in got)


@settings(max_examples=300, deadline=None)
@given(terms())
def test_normal_form_agrees_with_tensor_model(t):
    try:
        nf = normalize_to_hall(t)
    except ValueError:
        reject()
    assert tensor_of_combo(nf) == tensor_image(t)
    for s in nf:
        assert is_basic(s) or (s.left == s.right)


@settings(max_examples=200, deadline=None)
@given(terms(max_leaves=2), terms(max_leaves=2), terms(max_leaves=2))
def test_jacobi_identity_in_tensor_model(u, v, w):
    assert tensor_of_combo(jacobi_relation(u, v, w)) == {}


@settings(max_examples=200, deadline=None)
@given(terms(max_leaves=3), terms(max_leaves=3))
def test_antisymmetry_in_tensor_model(a, b):
    lhs = tensor_image(br(a, b))
    rhs = {k: swap_sign(a.weight, b.weight) * v for k, v in tensor_image(br(b, a)).items()}
    assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(terms())
def test_normal_form_is_idempotent(t):
    try:
        nf = normalize_to_hall(t)
    except ValueError:
        reject()
    assert normalize_combo(nf) == nf


@settings(max_examples=200, deadline=None)
@given(terms())
def test_parse_render_round_trip(t):
    assert parse_term(str(t)) == t


def test_parse_shorthand_and_combos():
    assert parse_term("[x13,[x13,x23]]") == br(x(1, 3), br(x(1, 3), x(2, 3)))
    c = parse_combo("x(2,3) - 2*[x(1,3),x(2,3)] + y1")
    assert c == LinComb([(x(2, 3), 1), (br(x(1, 3), x(2, 3)), -2), (y(1), 1)])
    assert parse_combo("0") == LinComb()
    assert parse_combo(str(c)) == c
    with pytest.raises(ValueError):
        parse_term("[x13,x23")


def test_generator_validation():
    with pytest.raises(ValueError):
        x(2, 2)
    with pytest.raises(ValueError):
        y(0)


def test_expand_bilinear():
    a = LinComb([(x(1, 3), 1), (x(2, 3), 2)])
    out = expand_bilinear((a, x(1, 2)))
    assert out == LinComb([(br(x(1, 3), x(1, 2)), 1), (br(x(2, 3), x(1, 2)), 2)])


def test_normalize_rejects_foreign_generators():
    with pytest.raises(ValueError):
        normalize_to_hall(br(x(1, 3), x(2, 3)), generators=[x(1, 3)])
