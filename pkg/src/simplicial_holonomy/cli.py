"""Command-line front end.

    simplicial-holonomy chains --n 2 --r 2
    simplicial-holonomy stokes --random 100 --n 2 --r 2 --seed 7
    simplicial-holonomy hol --space delta1.json --conn const-e.json --order 6
    simplicial-holonomy selftest

Every JSON file read or written carries "v": 1.  Exit status: 0 on success,
1 when a verification fails, 2 on bad input, 3 when a cap is exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from math import comb

from . import ainfty, chains, holonomy, integrate
from .derham import GForm, word_degree
from .dpalg import calculus_suite
from .linfty import abelian, from_dg_lie
from .simplicial import (CapError, FormMap, TableSet, check_face_nondegeneracy,
                         check_inclusion_naturality, global_form, path_space, simplex)

VERSION = 1


class InputError(Exception):
    pass


# acceptance suites

@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int
    failures: int
    seconds: float = 0.0
    limit: float = 0.0
    exhaustive: bool = True
    detail: list = field(default_factory=list)

    def line(self):
        status = "PASS" if self.ok and self.seconds <= self.limit else "FAIL"
        mark = "" if self.exhaustive else " [reduced caps]"
        extra = "" if self.ok else "; " + "; ".join(self.detail[:4])
        slow = "" if self.seconds <= self.limit else f" (over {self.limit:g} s)"
        return (f"{status} {self.name}: {self.checked - self.failures}/{self.checked} "
                f"in {self.seconds:.2f} s{slow}{mark}{extra}")


def suite_chain_counts(seed, quick=False):
    top = 3 if quick else 5
    checked = bad = 0
    detail = []
    for n in range(top + 1):
        for r in range(top + 1):
            checked += 1
            got = chains.enumerate_maximal(n, r)
            if len(got) != comb(n + r, n):
                bad += 1
                detail.append(f"count n={n} r={r}: {len(got)}")
            if n <= 3 and r <= 3 and sorted(got, key=lambda c: c.points) != sorted(
                    chains.brute_force_maximal(n, r), key=lambda c: c.points):
                bad += 1
                detail.append(f"brute force n={n} r={r}")
    return checked, bad, detail, not quick


def suite_glueing(seed, quick=False):
    top = 2 if quick else 3
    checked = bad = 0
    detail = []
    for name, fn in chains.GLUEING_CHECKS.items():
        k = sum(len(fn(n, r)) for n in range(top + 1) for r in range(top + 1))
        checked += 1
        if k:
            bad += 1
            detail.append(f"{name}: {k} counterexamples")
    k = sum(len(check_inclusion_naturality(n, r, mmax=top))
            for n in range(top + 1) for r in range(top + 1))
    checked += 1
    if k:
        bad += 1
        detail.append(f"inclusion naturality: {k} counterexamples")
    rng = random.Random(seed)
    k = 0
    for n in range(1, top + 1):
        for r in range(top + 1):
            forms = [integrate.random_gform(rng, n + r, None, W=1, degree=2, nterms=2,
                                            coeff=3) for _ in range(4)]
            k += len(check_face_nondegeneracy(n, r, forms))
    checked += 1
    if k:
        bad += 1
        detail.append(f"face nondegeneracy: {k} counterexamples")
    return checked, bad, detail, not quick


def suite_calculus(seed, quick=False):
    n, fails = calculus_suite(100 if quick else 500, seed)
    detail = [f"{name} on {f!r} (i={i}, bounds {b})" for name, f, i, b, _ in fails]
    return n, len(fails), detail, not quick


def suite_stokes(seed, quick=False):
    count = 20 if quick else 100
    passed, fails = integrate.stokes_suite(count, seed)
    return count, len(fails), [f"n={n} r={r}: {g}" for n, r, g, _ in fails], not quick


def suite_differential(seed, quick=False):
    checked, fails = holonomy.differential_suite(trials=2 if quick else 8, seed=seed)
    return checked, len(fails), [f"X=Delta^{n} r={r} path {g}" for n, r, g, _ in fails], \
        not quick


def suite_chain_map(seed, quick=False):
    checked, fails = holonomy.chain_map_suite(count=10 if quick else 40, seed=seed)
    return checked, len(fails), [f"simplex {x} form {g}" for g, x, _ in fails], not quick


def suite_exponential(seed, quick=False):
    ok, rational_ok, _ = holonomy.exponential_check(8)
    detail = ([] if ok else ["divided power series differs"]) + \
        ([] if rational_ok else ["rational embedding differs"])
    return 2, 2 - ok - rational_ok, detail, True


def suite_square_zero(seed, quick=False):
    L = 3 if quick else 4
    nil = from_dg_lie(["a", "b", "c"], [0, 1, 1], {}, {("a", "b"): {"c": 1}})
    checks = [
        ("Sym coderivation, abelian", lambda: abelian(["e", "f"], [0, 1]).check_D2(L)),
        ("Sym coderivation, nilpotent", lambda: nil.check_D2(L)),
        ("enveloping delta, nilpotent", lambda: nil.check_delta2(W=L)),
    ]
    ext = ainfty.exterior_algebra()
    dga = ainfty.from_dg_algebra(*ext, unit=())
    checks.append(("dg algebra", lambda: dga.check_square_zero(L)[0]))
    checks.append(("unitalized dg algebra", lambda: ainfty.unitalize(dga).check_square_zero(3)[0]))
    for n in range(4):
        A = ainfty.simplex_category(n)
        checks.append((f"A_infty^{n}", lambda A=A: A.check_square_zero(L)[0]))
        if n <= 2:
            checks.append((f"unitalized A_infty^{n}",
                           lambda A=A: ainfty.unitalize(A).check_square_zero(L)[0]))
    Q = ainfty.DGQuiver([0, 1], {"a": (0, 1, 1), "b": (0, 1, 0), "c": (1, 1, 0)},
                        {"a": {"b": 1}})
    FQ = ainfty.free_on_quiver(Q, 4)
    checks.append(("free model", lambda: FQ.check_square_zero(words=ainfty.exact_words(FQ, 3))[0]))
    detail = []
    bad = 0
    for name, fn in checks:
        k = len(fn())
        if k:
            bad += 1
            detail.append(f"{name}: {k} words")
    return len(checks), bad, detail, not quick


def nerve_families(alg):
    """Hand-checked candidates (n, family, valid).  On Delta^2 the composite
    is F(0,2) = F(0,1) F(1,2); with theta theta = 2 theta^[2],
    (1 + 2 a theta)(1 + 3 a theta) = 1 + 5 a theta + 12 aa theta^[2]."""
    one = ((), 0)
    a = (0,)
    units = {(i, i): {one: 1} for i in range(3)}
    f1 = {one: 1, ((a,), 1): 2, ((a, a), 2): 4}
    g = {**units, (0, 1): {one: 1, ((a,), 1): 2}, (1, 2): {one: 1, ((a,), 1): 3},
         (0, 2): {one: 1, ((a,), 1): 5, ((a, a), 2): 12}}
    g_wrong = {**g, (0, 2): {one: 1, ((a,), 1): 5, ((a, a), 2): 6}}
    return [
        (0, {"objects": ["*"], "arrows": {(0, 0): {one: 1}}}, True),
        (1, {"objects": ["*"] * 2, "arrows": {(0, 0): {one: 1}, (1, 1): {one: 1}, (0, 1): f1}},
         True),
        (1, {"objects": ["*"] * 2, "arrows": {(0, 0): {one: 2}, (1, 1): {one: 1}, (0, 1): f1}},
         False),
        (2, ainfty.toy_nerve_family(alg), True),
        (2, {"objects": ["*"] * 3, "arrows": g}, True),
        (2, {"objects": ["*"] * 3, "arrows": g_wrong}, False),
    ]


def sign_perturbations(family):
    for key, elem in family["arrows"].items():
        if key[0] == key[1]:
            continue
        for term in elem:
            arrows = {k: dict(v) for k, v in family["arrows"].items()}
            arrows[key][term] = -arrows[key][term]
            yield {"objects": family["objects"], "arrows": arrows}


def suite_cosimplicial_nerve(seed, quick=False):
    detail = []
    k = len(ainfty.check_cosimplicial(2 if quick else 3, 3))
    checked, bad = 1, int(bool(k))
    if k:
        detail.append(f"cosimplicial functoriality: {k} failures")
    alg = abelian(["e", "f"], [0, 0])
    B = ainfty.gtheta_category(alg, 3, 3, 1)
    for n, fam, valid in nerve_families(alg):
        checked += 1
        if ainfty.nerve_validate(fam, B, n)["ok"] != valid:
            bad += 1
            detail.append(f"family on Delta^{n} {'rejected' if valid else 'accepted'}")
        if not valid or n < 2:
            # on Delta^0, Delta^1 the composites are unconstrained
            continue
        for pert in sign_perturbations(fam):
            checked += 1
            if ainfty.nerve_validate(pert, B, n)["ok"]:
                bad += 1
                detail.append(f"sign perturbation on Delta^{n} accepted")
    return checked, bad, detail, not quick


def ahol_example(W=3):
    """A nonzero degree-1 connection on Delta^2 into the rank-2 abelian g."""
    from .dpalg import DPPoly
    alg = abelian(["e", "f"], [0, 0])
    X = simplex(2, cap=2)
    degs = tuple(alg.degs)
    form = (GForm.from_poly(DPPoly.var(2, 1), (1,), ((0,),), W, degs)
            + GForm.from_poly(DPPoly.const(2, 2), (2,), ((1,),), W, degs))
    return alg, global_form(X, form).to_form_map()


def suite_ahol(seed, quick=False):
    alg, nabla = ahol_example()
    FQ, B, F, table = ainfty.ahol(2, nabla, alg, W=3, max_leaves=2 if quick else 3)
    detail = []
    bad_q = ainfty.check_quiver_morphism(F.quiver, B, lambda a: table[a])
    words = ainfty.exact_words(FQ, FQ.max_leaves)
    bad = F.check(words)
    nontrivial = any(len(v) > 1 for v in table.values())
    if bad_q:
        detail.append(f"quiver morphism: {len(bad_q)} arrows")
    if bad:
        detail.append(f"F D = D F fails on {len(bad)} words")
    if not nontrivial:
        detail.append("holonomy table is trivial")
    return len(words) + 2, len(bad) + bool(bad_q) + (not nontrivial), detail, not quick


SUITES = [
    ("chain counts", suite_chain_counts, 5),
    ("glueing lemmas", suite_glueing, 60),
    ("calculus", suite_calculus, 10),
    ("Stokes", suite_stokes, 120),
    ("iterated integral differential", suite_differential, 120),
    ("de Rham chain map", suite_chain_map, 30),
    ("holonomy exponential", suite_exponential, 5),
    ("square zero", suite_square_zero, 60),
    ("cosimplicial and nerve", suite_cosimplicial_nerve, 30),
    ("holonomy functor", suite_ahol, 120),
]


def run_suite(index, seed=7, quick=False):
    name, fn, limit = SUITES[index]
    t = time.perf_counter()
    try:
        checked, bad, detail, exhaustive = fn(seed, quick)
    except Exception as e:  # a crashing suite is a failing suite
        checked, bad, detail, exhaustive = 1, 1, [f"{type(e).__name__}: {e}"], not quick
    return SuiteResult(name, bad == 0, checked, bad, time.perf_counter() - t, limit,
                       exhaustive, detail)


# input / output

def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(obj, dict) or obj.get("v") != VERSION:
        raise InputError(f'{path}: expected a JSON object with "v": {VERSION}')
    return obj


def emit(obj, args):
    text = json.dumps({"v": VERSION, **obj}, indent=1)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def load_space(obj):
    """{"simplex": n} or a cell table."""
    if "simplex" in obj:
        n = int(obj["simplex"])
        return simplex(n, cap=max(n, int(obj.get("cap", n)))), n
    return TableSet.from_json(obj), None


def load_form_map(obj, X):
    """{"form": GForm} on the top simplex of Delta^n, or {"cells": {id: GForm}}
    for a cell table."""
    if "form" in obj:
        if not hasattr(X, "maximal_chains"):
            raise InputError('"form" needs a standard simplex; use "cells" for a cell table')
        return global_form(X, GForm.from_json(obj["form"])).to_form_map()
    if not isinstance(X, TableSet):
        raise InputError('"cells" needs a cell table space')
    cells = {str(x[1]): x for k in range(X.cap + 1) for x in X.nondegenerate(k)}
    assignment = {}
    for key, val in obj["cells"].items():
        if key not in cells:
            raise InputError(f"connection names unknown cell {key}")
        assignment[cells[key]] = GForm.from_json(val)
    if not assignment:
        raise InputError("connection has no cells")
    g = next(iter(assignment.values()))
    return FormMap(X, assignment, g.W, g.degs)


# verbs

def cmd_chains(args):
    cs = chains.enumerate_maximal(args.n, args.r)
    if args.json:
        emit({"n": args.n, "r": args.r, "count": len(cs),
              "chains": [c.to_json()["points"] for c in cs]}, args)
    else:
        print(f"{len(cs)} chains [{args.n}] x [{args.r}]")
        for c in cs:
            print(" ".join(f"({a},{b})" for a, b in c.points))
    return 0


def cmd_integrate(args):
    g = GForm.from_json(load_json(args.form)["form"])
    if args.chain:
        c = chains.Chain.from_json(load_json(args.chain)["chain"])
        out = integrate.chain_integral(g, c)
    else:
        if args.n is None or args.r is None:
            raise InputError("integrate needs --chain or both --n and --r")
        pf = integrate.ProductCoordForm(g, args.n, args.r)
        out = integrate.fiberwise(pf.family(tuple(range(args.n + 1)),
                                            tuple(range(args.r + 1))), args.n, args.r)
    emit({"form": out.to_json()}, args)
    return 0


def cmd_stokes(args):
    signed, own = not args.unsigned, args.own_part
    if args.form:
        g = GForm.from_json(load_json(args.form)["form"])
        res = integrate.stokes_on_product(integrate.ProductCoordForm(g, args.n, args.r),
                                          args.n, args.r, signed, own)
        bad = {x: v for x, v in res.items() if v}
        for x, v in sorted(bad.items()):
            print(f"residual at {x}: {v}")
        print(f"residual 0 on {len(res) - len(bad)}/{len(res)} simplices")
        return 1 if bad else 0
    print(f"seed {args.seed}")
    passed, fails = integrate.stokes_suite(args.random, args.seed, args.n, args.r,
                                           signed=signed, own_part=own)
    for n, r, g, _ in fails[:5]:
        print(f"nonzero residual on Delta^{n} x Delta^{r}: {g}")
    print(f"residual 0 in {passed}/{args.random}")
    return 1 if fails else 0


def hol_table(X, nabla, order):
    PX = path_space(X, cap=0)
    rows = []
    for gamma in PX.simplices(0):
        val = holonomy.hol(PX, gamma, nabla, order)((0,))
        src = holonomy.endpoint(PX, 0)(gamma)
        tgt = holonomy.endpoint(PX, 1)(gamma)
        terms = []
        for (w, S), f in sorted(val.components().items()):
            terms.append({"bidegree": [len(w), word_degree(w, val.degs)],
                          "env": [list(l) for l in w], "value": f.to_json()})
        rows.append({"path": repr(gamma[1][0]), "source": repr(src), "target": repr(tgt),
                     "terms": terms})
    return rows


def cmd_hol(args):
    X, _ = load_space(load_json(args.space))
    nabla = load_form_map(load_json(args.conn), X)
    emit({"order": args.order, "hol": hol_table(X, nabla, args.order)}, args)
    return 0


def cmd_derham(args):
    g = GForm.from_json(load_json(args.form)["form"])
    X = simplex(g.n, cap=g.n)
    omega = global_form(X, g).to_form_map()
    cochain = holonomy.cochain_of(g, g.n)
    out = {"cochain": cochain.to_json()["values"]}
    status = 0
    if args.check:
        bad = [x for q in range(g.n + 1) for x in X.nondegenerate(q)
               if holonomy.chain_map_residual(omega, x)]
        out["chain_map"] = {"checked": sum(1 for q in range(g.n + 1)
                                           for _ in X.nondegenerate(q)),
                            "failures": [list(x) for x in bad]}
        status = 1 if bad else 0
    emit(out, args)
    return status


def cmd_ainfty_check(args):
    if args.builtin:
        kind, _, arg = args.builtin.partition(":")
        if kind == "simplex":
            A = ainfty.simplex_category(int(arg or 2))
        elif kind == "exterior":
            A = ainfty.from_dg_algebra(*ainfty.exterior_algebra(), unit=())
        else:
            raise InputError(f"unknown builtin {args.builtin}")
    else:
        A = ainfty.from_json(load_json(args.input))
    if args.unitalize:
        A = ainfty.unitalize(A)
    bad, n = A.check_square_zero(args.max_len)
    units = A.check_units(min(args.max_len, 3)) if A.units else []
    emit({"name": A.name, "square_zero": {"checked": n, "failures": [str(w) for w in bad]},
          "units": {"failures": [str(u) for u in units]}}, args)
    return 1 if bad or units else 0


def cmd_selftest(args):
    print(f"seed {args.seed}")
    failed = 0
    for i in range(len(SUITES)):
        res = run_suite(i, args.seed, args.quick)
        print(res.line())
        failed += not res.line().startswith("PASS")
    print(f"{len(SUITES) - failed}/{len(SUITES)} suites pass")
    return 1 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="simplicial-holonomy")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("chains", help="list the maximal chains of [n] x [r]")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.add_argument("--output")
    s.set_defaults(fn=cmd_chains)

    s = sub.add_parser("integrate", help="chain integral or fiberwise integral")
    s.add_argument("--form", required=True, help='{"v":1,"form":GForm}')
    s.add_argument("--chain", help='{"v":1,"chain":{"n","r","points"}}')
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--output")
    s.set_defaults(fn=cmd_integrate)

    s = sub.add_parser("stokes", help="Stokes residual on Delta^n x Delta^r")
    s.add_argument("--random", type=int, default=100)
    s.add_argument("--form")
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--unsigned", action="store_true", help="no face signs in the boundary term")
    s.add_argument("--own-part", action="store_true", help="integrate d(w) over part(d w)")
    s.set_defaults(fn=cmd_stokes)

    s = sub.add_parser("hol", help="holonomy along the paths of a space")
    s.add_argument("--space", required=True)
    s.add_argument("--conn", required=True)
    s.add_argument("--order", type=int, default=4)
    s.add_argument("--output")
    s.set_defaults(fn=cmd_hol)

    s = sub.add_parser("derham", help="de Rham cochain of a form on Delta^n")
    s.add_argument("--form", required=True)
    s.add_argument("--check", action="store_true", help="also check the chain-map law")
    s.add_argument("--output")
    s.set_defaults(fn=cmd_derham)

    s = sub.add_parser("ainfty-check", help="structural checks of an A-infinity category")
    s.add_argument("--input")
    s.add_argument("--builtin", help="simplex:N or exterior")
    s.add_argument("--unitalize", action="store_true")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--output")
    s.set_defaults(fn=cmd_ainfty_check)

    s = sub.add_parser("selftest", help="run every acceptance suite")
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--quick", action="store_true", help="reduced caps")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verb == "stokes" and args.form and (args.n is None or args.r is None):
        print("error: --form needs --n and --r", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapError as e:
        print(f"cap exhausted: {e}", file=sys.stderr)
        return 3
    except (KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
