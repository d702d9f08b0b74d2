"""Executable checks behind ``knotspec verify`` and the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
comparison, so a run always reports every criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations
from math import factorial
from typing import Callable

from .brackets import (
    Bracket,
    Gen,
    LinComb,
    Term,
    is_basic,
    jacobi_relation,
    parse_combo,
    parse_term,
    swap_sign,
    x,
    y,
)
from .correspondence import (
    MARK_K_ORIENTATION,
    Psi_D,
    _dense,
    d1_combinatorial,
    e2_diagonal,
    ihx_basis,
    phi_D,
    phi_T,
    psi_D,
    psi_T,
    psi_T_combo,
    to_shapes,
)
from .cosimplicial import codegeneracy, coface, push_combo
from .spectral import (
    DsepElement,
    d1_bruteforce,
    d1_simplified,
    dsep_generators,
    e1_entry,
    separated_jacobi_relations,
)
from .utg import marked_keys, relation_vectors, shape_quotient, tree_keys
from .zlinalg import hermite_normal_form, in_lattice

__all__ = ["CheckResult", "CRITERIA", "SUITES", "run_suite", "WORKED_EXAMPLE"]


@dataclass
class CheckResult:
    criterion: str
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{status} criterion {self.criterion}: {self.name}{tail}"

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed, "detail": self.detail}


# -- 1 -----------------------------------------------------------------------


def check_low_degree_d1() -> list[CheckResult]:
    out = []
    img = d1_bruteforce(y(1), 2)
    expected = LinComb.of(x(1, 2))
    out.append(
        CheckResult(
            "1a",
            "d1(y(1)) = x(1,2)",
            img == expected,
            f"alternating sum y(2) - (x(1,2) + y(1) + y(2)) + y(1) evaluates to {img}",
            {"image": str(img)},
        )
    )
    gens = e1_entry(2, 2).basis
    iso = len(gens) == 1 and len(img) == 1 and abs(img.get(gens[0], 0)) == 1 and e1_entry(1, 2).free_rank == 1
    out.append(CheckResult("1b", "d1: E1_{1,2} -> E1_{2,2} is an isomorphism", iso, f"Z -> Z, y(1) -> {img}"))
    pieces = [push_combo(coface(l, 2), LinComb.of(x(1, 2))) for l in range(4)]
    want = [
        LinComb.of(x(2, 3)),
        LinComb([(x(1, 3), 1), (x(2, 3), 1)]),
        LinComb([(x(1, 2), 1), (x(1, 3), 1)]),
        LinComb.of(x(1, 2)),
    ]
    total = d1_bruteforce(x(1, 2), 3)
    ok = pieces == want and not total
    shown = " ".join(f"{'+-'[l % 2]} ({pc})" for l, pc in enumerate(pieces))
    out.append(CheckResult("1c", "d1 into E1_{3,3} is zero by exact cancellation", ok, f"{shown} = {total}"))
    return out


# -- 2 -----------------------------------------------------------------------


def check_oracle_equivalence(ps=(4, 5, 6)) -> list[CheckResult]:
    bad = []
    count = 0
    for p in ps:
        for w in dsep_generators(p):
            count += 1
            if d1_bruteforce(w.term, p) != d1_simplified(w):
                bad.append(f"p={p} {w}")
    return [CheckResult("2", f"oracle equivalence of both d1 forms, p in {list(ps)}", not bad, f"{count - len(bad)}/{count} generators agree" + (f"; first failure {bad[0]}" if bad else ""))]


# -- 3 -----------------------------------------------------------------------

WORKED_EXAMPLE = {
    "w": "[[[x(3,7),x(2,7)],x(5,7)],[[x(1,7),x(2,7)],[x(4,7),x(6,7)]]]",
    "k_part": "[[[x(4,8),x(2,8)],x(6,8)],[[x(1,8),x(3,8)],[x(5,8),x(7,8)]]] + [[[x(4,8),x(3,8)],x(6,8)],[[x(1,8),x(2,8)],[x(5,8),x(7,8)]]]",
    "top_part": "-[[[x(3,7),x(2,7)],x(5,7)],[[x(1,8),x(2,8)],[x(4,8),x(6,8)]]] - [[[x(3,8),x(2,8)],x(5,8)],[[x(1,7),x(2,7)],[x(4,7),x(6,7)]]]",
}


def check_worked_example() -> list[CheckResult]:
    w = parse_term(WORKED_EXAMPLE["w"])
    got = d1_simplified(w, 8)
    want = parse_combo(WORKED_EXAMPLE["k_part"]) + parse_combo(WORKED_EXAMPLE["top_part"])
    ok = got == want and len(got) == 4 and set(got.values()) <= {1, -1}
    return [CheckResult("3", "worked example k=2, p=8 reproduced term for term", ok, f"{len(got)} terms")]


# -- 4 -----------------------------------------------------------------------


def check_rank_identities(ps=range(3, 7)) -> list[CheckResult]:
    rows = []
    ok = True
    for p in ps:
        e1 = e1_entry(p, p).free_rank
        grp = shape_quotient(tree_keys(p - 1, shapes=True), ["AS", "IHX"])
        target = factorial(p - 2)
        good = e1 == target and grp.free_rank == target and not grp.invariant_factors
        ok &= good
        rows.append(f"p={p}: E1={e1}, T={grp.describe()}, (p-2)!={target}")
    return [CheckResult("4", "rank E1_{p,p} = rank T_{p-1} = (p-2)!", ok, "; ".join(rows))]


# -- 5 -----------------------------------------------------------------------


def _all_brackets(items: tuple[Gen, ...]) -> set[Term]:
    if len(items) == 1:
        return {items[0]}
    out = set()
    for cut in range(1, len(items)):
        for a in _all_brackets(items[:cut]):
            for b in _all_brackets(items[cut:]):
                out.add(Bracket(a, b))
    return out


def brute_force_basic(multiset: list[Gen]) -> set[Term]:
    """Basic products with the given multidegree, by trying every bracketing of every word."""
    found = set()
    for word in set(permutations(multiset)):
        for t in _all_brackets(word):
            if is_basic(t):
                found.add(t)
    return found


def check_superdiagonal(ps=(4, 5, 6)) -> list[CheckResult]:
    ok = True
    rows = []
    for p in ps:
        e = e1_entry(p - 1, p)
        gens = [x(i, p - 1) for i in range(1, p - 1)]
        brute: set[Term] = set()
        for g in gens:
            brute |= brute_force_basic(gens + [g])
        t_brute = brute_force_basic(gens)
        m = p - 2
        good = (
            set(e.basis) == brute
            and len(e.basis) == m * factorial(m) // 2
            and len(e.torsion_symbols) == factorial(p - 3) == len(t_brute)
            and {t for t, _ in e.torsion_symbols} == t_brute
            and all(s == "Z/2" for _, s in e.torsion_symbols)
        )
        ok &= good
        rows.append(f"p={p}: |F|={len(e.basis)}, |T|={len(e.torsion_symbols)}")
    hand = {parse_term("[x13,[x13,x23]]"), parse_term("[x23,[x13,x23]]")}
    ok &= set(e1_entry(3, 4).basis) == hand
    return [CheckResult("5", "superdiagonal F basis and |T| = (p-3)! copies of Z/2", ok, "; ".join(rows))]


# -- 6 -----------------------------------------------------------------------


def _multilinear(labels: tuple[int, ...], top: int) -> list[Term]:
    """Every bracketing of every ordering of ``x(i, top)`` for ``i`` in ``labels``."""
    out = []
    for word in permutations(labels):
        out.extend(_all_brackets(tuple(x(i, top) for i in word)))
    return out


def _oriented_dsep(p: int) -> list[DsepElement]:
    out = []
    for w in dsep_generators(p):
        for a in _reorient(w.c1):
            for b in _reorient(w.c2):
                for t in (Bracket(a, b), Bracket(b, a)):
                    out.append(DsepElement.from_term(t, p))
    return out


def _reorient(t: Term) -> list[Term]:
    if isinstance(t, Gen):
        return [t]
    out = []
    for a in _reorient(t.left):
        for b in _reorient(t.right):
            out.extend((Bracket(a, b), Bracket(b, a)))
    return out


def check_round_trips(max_degree: int = 5) -> list[CheckResult]:
    bad = []
    n_t = n_d = 0
    for d in range(1, max_degree + 1):
        p = d + 1
        for t in _multilinear(tuple(range(1, p)), p):
            n_t += 1
            st = psi_T(t)
            if phi_T(st.key) != (st.sign, t):
                bad.append(f"tree round trip failed on {t}")
        for key in tree_keys(d):
            s, t = phi_T(key)
            st = psi_T(t)
            if st.key != key or st.sign != s:
                bad.append(f"tree round trip failed on {key}")
    for p in range(4, max_degree + 2):
        for w in _oriented_dsep(p):
            n_d += 1
            s, g = psi_D(w)
            if phi_D(g) != (s, w):
                bad.append(f"marked round trip failed on {w}")
        for key in marked_keys(p - 1, [(k, p - 1) for k in range(1, p - 1)]):
            if key.o != MARK_K_ORIENTATION:
                continue
            s, w = phi_D(key)
            if Psi_D(w) != key or psi_D(w)[0] != s:
                bad.append(f"marked round trip failed on {key}")
    detail = f"{n_t} brackets, {n_d} separated generators" + (f"; {bad[0]}" if bad else "")
    return [CheckResult("6", "round trips Phi_T o Psi_T and Phi_D o Psi_D are the identity", not bad, detail)]


# -- 7 -----------------------------------------------------------------------


def _random_multilinear(labels: list[int], top: int, rng: random.Random) -> Term:
    if len(labels) == 1:
        return x(labels[0], top)
    labels = labels[:]
    rng.shuffle(labels)
    cut = rng.randint(1, len(labels) - 1)
    return Bracket(_random_multilinear(labels[:cut], top, rng), _random_multilinear(labels[cut:], top, rng))


def check_relation_correspondence(cases: int = 100, seed: int = 20240501) -> list[CheckResult]:
    rng = random.Random(seed)
    rows = []
    ok = True
    for d in range(2, 6):
        p = d + 1
        shapes, index, ihx = ihx_basis(d)
        basis = hermite_normal_form(ihx, len(shapes)) if ihx else ()
        as_ok = jac_ok = 0
        for _ in range(cases):
            labels = list(range(1, p))
            rng.shuffle(labels)
            cut = rng.randint(1, d - 1)
            a = _random_multilinear(labels[:cut], p, rng)
            b = _random_multilinear(labels[cut:], p, rng)
            rel = LinComb([(Bracket(a, b), 1), (Bracket(b, a), -swap_sign(a.weight, b.weight))])
            as_ok += not to_shapes(psi_T_combo(rel))
            if d >= 3:
                c1, c2 = sorted(rng.sample(range(1, d), 2))
                u = _random_multilinear(labels[:c1], p, rng)
                v = _random_multilinear(labels[c1:c2], p, rng)
                w = _random_multilinear(labels[c2:], p, rng)
                jac_ok += in_lattice(_dense(psi_T_combo(jacobi_relation(u, v, w)), index), basis)
        want_j = cases if d >= 3 else 0
        ok &= as_ok == cases and jac_ok == want_j
        rows.append(f"deg {d}: AS {as_ok}/{cases}, IHX {jac_ok}/{want_j}")
    for p in (4, 5):
        ms = marked_keys(p - 1, [(k, p - 1) for k in range(1, p - 1)], shapes=True)
        midx = {k: i for i, k in enumerate(ms)}
        rows_ihx = []
        for vec in relation_vectors(ms, "IHXsep", modulo_as=True):
            r = [0] * len(ms)
            for k, c in vec.coeffs:
                r[midx[k]] += c
            rows_ihx.append(r)
        basis = hermite_normal_form(rows_ihx, len(ms)) if rows_ihx else ()
        rels = separated_jacobi_relations(p)
        good = 0
        for rel in rels:
            vec: dict = {}
            for el, c in rel.items():
                s, k = psi_D(el)
                vec[k] = vec.get(k, 0) + s * c
            r = [0] * len(ms)
            for k, c in to_shapes(vec).items():
                r[midx[k]] += c
            good += in_lattice(r, basis)
        ok &= good == len(rels)
        rows.append(f"p={p}: separated Jacobi in IHXsep span {good}/{len(rels)}")
    return [CheckResult("7", "antisymmetry/Jacobi map to AS/IHX, separated Jacobi to IHXsep", ok, "; ".join(rows))]


# -- 8 -----------------------------------------------------------------------


def check_e2_fixed_points() -> list[CheckResult]:
    rows = []
    ok = True
    for p in (0, 1, 2):
        g = e2_diagonal(p).group
        ok &= g.is_trivial
        rows.append(f"E2_{p},{p}={g.describe()}")
    g3 = e2_diagonal(3).group
    ok &= g3.free_rank == 1 and not g3.invariant_factors
    rows.append(f"E2_3,3={g3.describe()}")
    data = {}
    for p in (4, 5):
        r = e2_diagonal(p)
        c = r.certificate
        good = c["image_in_stu2_span"] and c["stu2_span_in_image"] and c["image_equals_stu2_span"]
        ok &= good
        rows.append(f"E2_{p},{p}={r.group.describe()} (invariant factors {list(r.group.invariant_factors)}, im d1 = STU2 span: {good})")
        data[p] = r.to_json()
    return [CheckResult("8", "E2 fixed points and im d1 = STU2-difference span", ok, "; ".join(rows), data)]


# -- 9 -----------------------------------------------------------------------


def check_cross_side(ps=(4, 5)) -> list[CheckResult]:
    bad = []
    count = 0
    for p in ps:
        shapes, index, ihx = ihx_basis(p - 1)
        basis = hermite_normal_form(ihx, len(shapes))
        for w in dsep_generators(p):
            count += 1
            s, g = psi_D(w)
            comb = {k: s * v for k, v in d1_combinatorial(g).items()}
            alg = psi_T_combo(d1_simplified(w))
            diff = [a - b for a, b in zip(_dense(comb, index), _dense(alg, index))]
            if not in_lattice(diff, basis):
                bad.append(
                    f"p={p} w={w}: combinatorial {_fmt_vec(to_shapes(comb))} vs algebraic {_fmt_vec(to_shapes(alg))}"
                )
    detail = f"{count - len(bad)}/{count} generators agree modulo IHX" + ("; " + " | ".join(bad) if bad else "")
    return [CheckResult("9", "psi-transported algebraic d1 equals combinatorial d1", not bad, detail)]


def _fmt_vec(v: dict) -> str:
    return " ".join(f"{c:+d}*{k}" for k, c in sorted(v.items(), key=lambda kc: str(kc[0]))) or "0"


# -- 10 ----------------------------------------------------------------------


def _generators(level: int) -> list[Gen]:
    return [x(i, j) for j in range(2, level + 1) for i in range(1, j)] + [y(k) for k in range(1, level + 1)]


def check_simplicial_identities(max_level: int = 7) -> list[CheckResult]:
    bad = []
    n = 0
    for level in range(1, max_level + 1):
        for g in _generators(level):
            c = LinComb.of(g)
            for i in range(level + 2):
                up = push_combo(coface(i, level), c)
                for j in range(level + 1):
                    lhs = push_combo(codegeneracy(j, level), up)
                    if i == j or i == j + 1:
                        rhs = c
                    elif i < j:
                        rhs = push_combo(coface(i, level - 1), push_combo(codegeneracy(j - 1, level - 1), c))
                    else:
                        rhs = push_combo(coface(i - 1, level - 1), push_combo(codegeneracy(j, level - 1), c))
                    n += 1
                    if lhs != rhs:
                        bad.append(f"s^{j} delta^{i} on {g} at level {level}")
    detail = f"{n - len(bad)}/{n} identities hold" + (f"; first failure {bad[0]}" if bad else "")
    return [CheckResult("10", "codegeneracy-coface identities on generators, levels <= 7", not bad, detail)]


CRITERIA: dict[str, Callable[[], list[CheckResult]]] = {
    "1": check_low_degree_d1,
    "2": check_oracle_equivalence,
    "3": check_worked_example,
    "4": check_rank_identities,
    "5": check_superdiagonal,
    "6": check_round_trips,
    "7": check_relation_correspondence,
    "8": check_e2_fixed_points,
    "9": check_cross_side,
    "10": check_simplicial_identities,
}

SUITES = {
    "paper-fixed-points": ["1", "3", "5", "8"],
    "all": list(CRITERIA),
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out: list[CheckResult] = []
    for c in SUITES[name]:
        out.extend(CRITERIA[c]())
    return out
