from itertools import combinations, permutations
from math import factorial

import pytest

from knotspec.brackets import LinComb, normalize_combo, normalize_to_hall, parse_combo, parse_term, x, y
from knotspec.cosimplicial import codegeneracy, push_combo
from knotspec.spectral import (
    DsepElement,
    canonicalize_dsep,
    d1_bruteforce,
    d1_low,
    d1_simplified,
    dsep_generators,
    e1_entry,
    is_separated,
    reduce_to_dsep,
    separated_jacobi_relations,
)
from knotspec.verify import _all_brackets, brute_force_basic
from knotspec.zlinalg import GroupPresentation, subgroup_equal

# |F| for p = 4..7: (p-2) * (p-2)! / 2
F_SIZES = {4: 2, 5: 9, 6: 48, 7: 300}
# |D^sep| for p = 4..7, frozen from the enumeration and cross-checked below
DSEP_SIZES = {4: 2, 5: 12, 6: 96, 7: 960}


def test_e1_examples():
    assert e1_entry(2, 2).basis == (x(1, 2),)
    assert e1_entry(0, 1).is_zero and e1_entry(0, 1).describe() == "0"
    assert e1_entry(3, 2).is_zero
    e = e1_entry(3, 4)
    assert set(e.basis) == {parse_term("[x13,[x13,x23]]"), parse_term("[x23,[x13,x23]]")}
    assert [(str(t), s) for t, s in e.torsion_symbols] == [("[x(1,3),x(2,3)]", "Z/2")]
    assert e.describe() == "Z/2 + Z^2"
    assert e1_entry(1, 2).basis == (y(1),)
    with pytest.raises(ValueError):
        e1_entry(-1, 2)


def test_e1_json_fields():
    data = e1_entry(3, 4).to_json()
    assert data["free_rank"] == 2 and data["torsion"] == ["Z/2"] and len(data["basis"]) == 2


@pytest.mark.parametrize("p", range(2, 8))
def test_diagonal_free_rank(p):
    assert e1_entry(p, p).free_rank == factorial(p - 2)


@pytest.mark.parametrize("p", range(4, 8))
def test_superdiagonal_counts(p):
    e = e1_entry(p - 1, p)
    assert e.free_rank == F_SIZES[p]
    assert len(e.torsion_symbols) == factorial(p - 3)


@pytest.mark.parametrize("p", [3, 4, 5])
def test_diagonal_basis_matches_brute_force(p):
    gens = [x(i, p) for i in range(1, p)]
    assert set(e1_entry(p, p).basis) == brute_force_basic(gens)


@pytest.mark.parametrize("p", range(2, 7))
def test_diagonal_basis_in_codegeneracy_kernels(p):
    for b in e1_entry(p, p).basis:
        for l in range(p):
            assert not push_combo(codegeneracy(l, p - 1), LinComb.of(b))


def test_higher_entries_are_formal():
    e = e1_entry(2, 4)
    assert e.formal and all(s.startswith("pi_") for _, s in e.formal)


# -- separated generators ----------------------------------------------------


def test_dsep_p4():
    gens = dsep_generators(4)
    assert [str(w) for w in gens] == ["[x(1,3),[x(1,3),x(2,3)]]", "[x(2,3),[x(1,3),x(2,3)]]"]
    assert [w.k for w in gens] == [1, 2]
    with pytest.raises(ValueError):
        dsep_generators(3)


@pytest.mark.parametrize("p", [4, 5, 6, 7])
def test_dsep_sizes_and_invariants(p):
    gens = dsep_generators(p)
    assert len(gens) == len(set(gens)) == DSEP_SIZES[p]
    for w in gens:
        assert w.left_labels & w.right_labels == {w.k}
        assert w.left_labels | w.right_labels == set(range(1, p - 1))
        assert canonicalize_dsep(w.term, p) == (1, w)


def test_dsep_count_formula():
    # choose k, split the rest into two sides, and count bracketings of each side:
    # a multilinear bracket on m leaves has (2m-3)!! antisymmetry classes
    def classes(m):
        out = 1
        for j in range(1, 2 * m - 2, 2):
            out *= j
        return out

    for p in (4, 5, 6, 7):
        n = p - 2
        total = 0
        for k in range(1, n + 1):
            rest = [i for i in range(1, n + 1) if i != k]
            for r in range(len(rest) + 1):
                for a in combinations(rest, r):
                    total += classes(r + 1) * classes(n - r)
        assert total // 2 == DSEP_SIZES[p]


def test_canonicalize_with_sign():
    s, w = canonicalize_dsep(parse_term("[[x13,x23],x13]"), 4)
    assert str(w) == "[x(1,3),[x(1,3),x(2,3)]]"
    assert s == 1  # weights 2 and 1: (3)(2) is even
    assert normalize_to_hall(parse_term("[[x13,x23],x13]")) == normalize_to_hall(w.term) * s


def test_invalid_separated_terms():
    with pytest.raises(ValueError):
        DsepElement.from_term(parse_term("[x23,[x13,x13]]"), 4)
    with pytest.raises(ValueError):
        DsepElement.from_term(parse_term("[x13,x23]"), 4)
    with pytest.raises(ValueError):
        DsepElement.from_term(parse_term("[x14,[x13,x23]]"), 4)
    assert is_separated(parse_term("[x13,[x13,x23]]"), 1)
    assert not is_separated(parse_term("[x23,[x13,x13]]"), 1)


def _one_doubled(p):
    """Every bracketing of every word over x(., p-1) with one label doubled."""
    out = set()
    for k in range(1, p - 1):
        word = [x(i, p - 1) for i in range(1, p - 1)] + [x(k, p - 1)]
        for perm in set(permutations(word)):
            out |= _all_brackets(perm)
    return sorted(out, key=str)


@pytest.mark.parametrize("p", [4, 5])
def test_reduce_to_dsep_is_sound(p):
    for t in _one_doubled(p):
        combo = reduce_to_dsep(t, p)
        back = LinComb()
        for w, c in combo.items():
            back.iadd(LinComb.of(w.term), c)
        assert normalize_combo(back) == normalize_to_hall(t), t


def test_reduce_examples():
    w = dsep_generators(4)[0]
    assert reduce_to_dsep(w.term, 4) == {w: 1}
    out = reduce_to_dsep(parse_term("[x23,[x13,x13]]"), 4)
    assert out and all(isinstance(k, DsepElement) for k in out)
    with pytest.raises(ValueError):
        reduce_to_dsep(parse_term("[x13,x23]"), 4)


@pytest.mark.parametrize("p", [4, 5, 6])
def test_dsep_spans_superdiagonal(p):
    """Hall images of D^sep span Z^F, and Z[D^sep] / separated Jacobi has rank |F|."""
    gens = dsep_generators(p)
    basis = e1_entry(p - 1, p).basis
    col = {t: i for i, t in enumerate(basis)}
    rows = []
    for w in gens:
        row = [0] * len(basis)
        for t, c in normalize_to_hall(w.term).items():
            row[col[t]] += c
        rows.append(row)
    ident = [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]
    assert subgroup_equal(rows, ident)
    idx = {w: i for i, w in enumerate(gens)}
    rels = separated_jacobi_relations(p)
    grp = GroupPresentation.from_relations([{idx[w]: c for w, c in r.items()} for r in rels], len(gens))
    assert grp.free_rank == len(basis) and not grp.invariant_factors
    for r in rels:
        assert not any(sum(c * rows[idx[w]][j] for w, c in r.items()) for j in range(len(basis)))


# -- d1 ------------------------------------------------------------------------


def test_low_degree_d1():
    assert d1_bruteforce(y(1), 2) == LinComb.of(x(1, 2), -1)
    assert not d1_bruteforce(x(1, 2), 3)
    assert d1_low(1) == []
    assert d1_low(2) == [(y(1), LinComb.of(x(1, 2), -1))]
    with pytest.raises(ValueError):
        d1_low(4)


def test_d1_p4_example():
    w = DsepElement.from_term(parse_term("[x13,[x13,x23]]"), 4)
    want = parse_combo("-[x14,[x24,x34]] - [x24,[x14,x34]] - [x13,[x14,x24]] - [x14,[x13,x23]]")
    assert d1_simplified(w) == want
    assert d1_bruteforce(w.term, 4) == want


def test_worked_example_p8():
    w = parse_term("[[[x37,x27],x57],[[x17,x27],[x47,x67]]]")
    want = parse_combo(
        "[[[x48,x28],x68],[[x18,x38],[x58,x78]]] + [[[x48,x38],x68],[[x18,x28],[x58,x78]]]"
        " - [[[x37,x27],x57],[[x18,x28],[x48,x68]]] - [[[x38,x28],x58],[[x17,x27],[x47,x67]]]"
    )
    assert d1_simplified(w, 8) == want
    assert d1_bruteforce(w, 8) == want


@pytest.mark.parametrize("p", [4, 5, 6])
def test_oracle_equivalence(p):
    for w in dsep_generators(p):
        assert d1_bruteforce(w.term, p) == d1_simplified(w)


@pytest.mark.parametrize("p", [4, 5, 6])
def test_d1_lands_in_codegeneracy_kernels(p):
    for w in dsep_generators(p):
        d = d1_simplified(w)
        for l in range(p):
            assert not push_combo(codegeneracy(l, p - 1), d)


def test_d1_simplified_needs_p():
    with pytest.raises(ValueError):
        d1_simplified(parse_term("[x13,[x13,x23]]"))
    with pytest.raises(ValueError):
        d1_bruteforce(x(1, 2), 0)


def test_d1_is_linear():
    a, b = dsep_generators(5)[:2]
    combo = {a.term: 2, b.term: -3}
    assert d1_bruteforce(combo, 5) == d1_simplified(a) * 2 - d1_simplified(b) * 3
