"""``knotspec`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Results go to
stdout (or ``--out``); timings and warnings go to stderr so that stdout is
byte-identical between runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .brackets import Bracket, LinComb, leaves, parse_term
from .correspondence import (
    Psi_D,
    e2_diagonal,
    ihx_basis,
    psi_D,
    psi_T,
    psi_T_combo,
    stu2_vectors,
    to_shapes,
)
from .cosimplicial import coface, push_combo
from .spectral import (
    DsepElement,
    d1_bruteforce,
    d1_low,
    d1_simplified,
    dsep_generators,
    e1_entry,
)
from .utg import decode, marked_keys, quotient_group, shape_quotient, to_dot, tree_keys
from .verify import SUITES, run_suite
from .zlinalg import rank

FEASIBLE_P = 7
RELATIONS = ("as", "ihx", "stu2")


class UsageError(Exception):
    pass


def _jobs(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("KNOTSPEC_JOBS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"KNOTSPEC_JOBS must be an integer, got {env!r}")


def _guard(p: int, force: bool) -> None:
    if p > FEASIBLE_P:
        if not force:
            raise UsageError(f"p = {p} is beyond the feasibility bound p <= {FEASIBLE_P}; pass --force to run anyway")
        print(f"warning: p = {p} exceeds the feasibility bound; sizes grow factorially", file=sys.stderr)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# -- e1 ----------------------------------------------------------------------


def cmd_e1(args) -> int:
    if args.p is None or args.q is None:
        raise UsageError("e1 needs --p and --q")
    if not 0 <= args.p <= args.q:
        raise UsageError("e1 needs 0 <= p <= q")
    _guard(args.p, args.force)
    e = e1_entry(args.p, args.q)
    if args.format == "json":
        _emit(args, _dump({**e.to_json(), "group": e.describe()}))
        return 0
    if args.format == "dot":
        raise UsageError("e1 has no DOT rendering")
    lines = [f"E1_{{{e.p},{e.q}}} = {e.describe()}", f"free rank: {e.free_rank}"]
    if e.torsion_symbols:
        lines.append("torsion: " + ", ".join(s for _, s in e.torsion_symbols))
    for t in e.basis:
        lines.append(f"  Z    {t}")
    for t, s in e.torsion_symbols + e.formal:
        lines.append(f"  {s:<4} {t}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# -- d1 ----------------------------------------------------------------------


def _d1_pair(w: DsepElement, oracle: bool) -> tuple[LinComb, bool | None]:
    img = d1_simplified(w)
    return img, (d1_bruteforce(w.term, w.p) == img) if oracle else None


def _d1_job(args: tuple) -> tuple[LinComb, bool | None]:
    p, index, oracle = args
    return _d1_pair(dsep_generators(p)[index], oracle)


def _low_d1(p: int) -> dict:
    if p == 1:
        return {"p": 1, "status": "zero", "images": [], "matrix": {"columns": [], "rows": []}, "d1_matrix_rank": 0,
                "note": "E1_{0,1} = 0"}
    (g, img), = d1_low(p)
    target = e1_entry(p, p).basis
    row = [img.get(t, 0) for t in target]
    out = {
        "p": p,
        "images": [{"input": str(g), "output": str(img)}],
        "matrix": {"columns": [str(t) for t in target], "rows": [row]},
        "d1_matrix_rank": rank([row]),
    }
    pieces = [push_combo(coface(l, p - 1), LinComb.of(g)) for l in range(p + 1)]
    shown = " ".join(f"{'+-'[l % 2]} ({pc})" for l, pc in enumerate(pieces))
    out["cancellation"] = f"{shown} = {img}"
    iso = len(target) == 1 and abs(row[0]) == 1 and len(e1_entry(p - 1, p).basis) == 1
    out["status"] = "isomorphism" if iso else "zero" if not img else "computed"
    return out


def cmd_d1(args) -> int:
    if args.p is None or args.p < 1:
        raise UsageError("d1 needs --p >= 1")
    p = args.p
    _guard(p, args.force)
    if p <= 3:
        data = _low_d1(p)
        if args.oracle:
            data["oracle"] = {"agree": True, "checked": len(data["images"])}
        return _render_d1(args, data)
    gens = dsep_generators(p)
    jobs = _jobs(args.jobs)
    t0 = time.perf_counter()
    if jobs > 1 and len(gens) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_d1_job, [(p, i, args.oracle) for i in range(len(gens))], chunksize=8))
    else:
        results = [_d1_pair(w, args.oracle) for w in gens]
    elapsed = time.perf_counter() - t0
    shapes, index, ihx = ihx_basis(p - 1)
    rows = []
    for img, _ in results:
        row = [0] * len(shapes)
        for k, c in to_shapes(psi_T_combo(img)).items():
            row[index[k]] += c
        rows.append(row)
    base = rank(ihx) if ihx else 0
    data = {
        "p": p,
        "status": "computed",
        "images": [],
        "matrix": {"columns": [str(k) for k in shapes], "rows": rows},
        "d1_matrix_rank": (rank(ihx + rows) if rows else base) - base,
    }
    for w, (img, ok) in zip(gens, results):
        item = {"input": str(w), "output": str(img)}
        if ok is not None:
            item["oracle_agrees"] = ok
        data["images"].append(item)
    if args.oracle:
        agree = all(ok for _, ok in results)
        data["oracle"] = {"agree": agree, "checked": len(results)}
        print(f"oracle run: {len(results)} generators in {elapsed:.3f}s", file=sys.stderr)
    return _render_d1(args, data)


def _render_d1(args, data: dict) -> int:
    failed = "oracle" in data and not data["oracle"]["agree"]
    if args.format == "json":
        _emit(args, _dump(data))
        return 1 if failed else 0
    if args.format == "dot":
        raise UsageError("d1 has no DOT rendering; use dsep --format dot for its domain")
    p = data["p"]
    lines = [f"d1: E1_{{{p - 1},{p}}} -> E1_{{{p},{p}}}"]
    if "note" in data:
        lines.append(f"  {data['note']}")
    for item in data["images"]:
        mark = ""
        if "oracle_agrees" in item:
            mark = "   [agree]" if item["oracle_agrees"] else "   [DISAGREE]"
        lines.append(f"  d1({item['input']}) = {item['output']}{mark}")
    if "cancellation" in data:
        lines.append(f"  alternating sum: {data['cancellation']}")
    if data["status"] == "isomorphism":
        lines.append(f"isomorphism E1_{{{p - 1},{p}}} = Z -> E1_{{{p},{p}}} = Z")
    elif data["status"] == "zero":
        lines.append("zero map")
    if p >= 4:
        lines.append(f"matrix: {len(data['matrix']['rows'])} x {len(data['matrix']['columns'])} over AS shapes of degree {p - 1}")
    lines.append(f"rank of d1 (modulo IHX): {data['d1_matrix_rank']}")
    if "oracle" in data:
        o = data["oracle"]
        lines.append(f"oracle: {'agree' if o['agree'] else 'DISAGREE'} ({o['checked']} generators)")
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


# -- e2 ----------------------------------------------------------------------


def cmd_e2(args) -> int:
    if args.p is None or args.p < 0:
        raise UsageError("e2 needs --p >= 0")
    _guard(args.p, args.force)
    r = e2_diagonal(args.p, with_certificate=not args.no_certificate)
    cert = r.certificate
    failed = any(cert.get(k) is False for k in ("image_in_stu2_span", "stu2_span_in_image", "image_equals_stu2_span"))
    if args.format == "json":
        _emit(args, _dump(r.to_json()))
    elif args.format == "dot":
        if args.p < 4:
            raise UsageError("e2 --format dot needs p >= 4 (no graphs in the certificate below that)")
        keys = marked_keys(args.p - 1, [(k, args.p - 1) for k in range(1, args.p - 1)], shapes=True)
        _emit(args, "".join(to_dot(decode(k), f"M{i}") for i, k in enumerate(keys)))
    else:
        lines = [f"E2_{{{r.p},{r.p}}} = {r.group.describe()}"]
        lines.append(f"invariant factors: {list(r.group.invariant_factors)}")
        lines.append(f"rank of d1: {r.d1_rank}")
        for k, v in cert.items():
            lines.append(f"  {k}: {v}")
        _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


# -- trees -------------------------------------------------------------------


def _parse_modulo(spec: str) -> list[str]:
    rels = [s.strip().lower() for s in spec.split(",") if s.strip()]
    bad = [r for r in rels if r not in RELATIONS]
    if bad:
        raise UsageError(f"unknown relation(s) {bad}; choose from {list(RELATIONS)}")
    return sorted(set(rels), key=RELATIONS.index)


def cmd_trees(args) -> int:
    if args.degree is None or args.degree < 1:
        raise UsageError("trees needs --degree >= 1")
    d = args.degree
    _guard(d + 1, args.force)
    rels = _parse_modulo(args.modulo)
    kinds = ["IHX"] if "ihx" in rels else []
    if "as" in rels:
        gens = tree_keys(d, shapes=True)
        extra = [to_shapes(v) for v in stu2_vectors(d)] if "stu2" in rels else []
        grp = shape_quotient(gens, kinds, extra)
    else:
        gens = tree_keys(d)
        extra = stu2_vectors(d, shapes=False) if "stu2" in rels else []
        grp = quotient_group(gens, kinds, extra)
    name = f"T_{d}" + (" modulo " + ", ".join(r.upper() for r in rels) if rels else "")
    if args.format == "json":
        _emit(args, _dump({
            "degree": d,
            "modulo": rels,
            "generators": [str(k) for k in gens],
            "group": grp.describe(),
            "free_rank": grp.free_rank,
            "invariant_factors": list(grp.invariant_factors),
        }))
    elif args.format == "dot":
        _emit(args, "".join(to_dot(decode(k), f"T{i}") for i, k in enumerate(gens)))
    else:
        lines = [f"{name} = {grp.describe()}", f"generators: {len(gens)}", f"relations: {len(grp.relations.rows)}"]
        lines += [f"  {k}" for k in gens]
        _emit(args, "\n".join(lines) + "\n")
    return 0


# -- dsep --------------------------------------------------------------------


def cmd_dsep(args) -> int:
    if args.p is None or args.p < 4:
        raise UsageError("dsep needs --p >= 4")
    _guard(args.p, args.force)
    gens = dsep_generators(args.p)
    signed = [psi_D(w) for w in gens]
    if args.format == "json":
        _emit(args, _dump({
            "p": args.p,
            "generators": [
                {"term": str(w), "k": w.k, "graph": str(key), "sign": s} for w, (s, key) in zip(gens, signed)
            ],
        }))
    elif args.format == "dot":
        _emit(args, "".join(to_dot(decode(key), f"D{i}") for i, (_, key) in enumerate(signed)))
    else:
        lines = [f"D^sep for p = {args.p}: {len(gens)} generators"]
        lines += [f"  k={w.k}  {w}  ->  {'+' if s > 0 else '-'}{key}" for w, (s, key) in zip(gens, signed)]
        _emit(args, "\n".join(lines) + "\n")
    return 0


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    ok = all(r.passed for r in results)
    if args.format == "json":
        _emit(args, _dump({"suite": args.suite, "passed": ok, "results": [r.to_json() for r in results]}))
    elif args.format == "dot":
        raise UsageError("verify has no DOT rendering")
    else:
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


# -- export-dot --------------------------------------------------------------


def cmd_export_dot(args) -> int:
    if not args.term:
        raise UsageError("export-dot needs --term")
    t = parse_term(args.term)
    labels = [g.i for g in leaves(t)]
    if isinstance(t, Bracket) and len(labels) != len(set(labels)):
        p = args.p if args.p is not None else max(g.j for g in leaves(t)) + 1
        g = decode(Psi_D(DsepElement.from_term(t, p)))
        name = "D"
    else:
        g = decode(psi_T(t).key)
        name = "T"
    _emit(args, to_dot(g, name))
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, metavar="N", help="worker processes (default: $KNOTSPEC_JOBS or 1)")
    common.add_argument("--force", action="store_true", help=f"allow p > {FEASIBLE_P}")

    ap = argparse.ArgumentParser(prog="knotspec", description="Diagonal E1/E2 pages for the space of long knots.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("e1", parents=[common], help="an E1_{p,q} entry")
    s.add_argument("--p", type=int)
    s.add_argument("--q", type=int)
    s.set_defaults(func=cmd_e1)

    s = sub.add_parser("d1", parents=[common], help="d1: E1_{p-1,p} -> E1_{p,p}")
    s.add_argument("--p", type=int)
    s.add_argument("--oracle", action="store_true", help="compare with the alternating-sum d1")
    s.set_defaults(func=cmd_d1)

    s = sub.add_parser("e2", parents=[common], help="E2_{p,p} with certificate")
    s.add_argument("--p", type=int)
    s.add_argument("--no-certificate", action="store_true", help="skip the STU2 span comparison")
    s.set_defaults(func=cmd_e2)

    s = sub.add_parser("trees", parents=[common], help="trees of a degree modulo relations")
    s.add_argument("--degree", type=int)
    s.add_argument("--modulo", default="as,ihx", help="comma list from: as, ihx, stu2")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("dsep", parents=[common], help="separated generators and their marked graphs")
    s.add_argument("--p", type=int)
    s.set_defaults(func=cmd_dsep)

    s = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    s.add_argument("--suite", choices=sorted(SUITES), default="all")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export-dot", parents=[common], help="DOT for a bracket or separated generator")
    s.add_argument("--term", help="e.g. '[x13,x23]' or '[x13,[x13,x23]]'")
    s.add_argument("--p", type=int, help="p for a separated generator (default: top label + 1)")
    s.set_defaults(func=cmd_export_dot)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"knotspec: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"knotspec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
