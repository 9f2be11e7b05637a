import copy
import json
import random

import pytest

from simplicial_holonomy.ainfty import (DGQuiver, ahol, check_cosimplicial, check_dg_algebra,
                                        check_quiver_morphism, cosimplicial_map, exact_words,
                                        exterior_algebra, extend_to_unitalization,
                                        free_builder, free_on_quiver, from_dg_algebra, from_json,
                                        gtheta_category, nerve_validate, path_quiver, pi_map,
                                        simplex_category, StrictFunctor, table_category, to_json,
                                        toy_nerve_family, unitalize)
from simplicial_holonomy.derham import GForm
from simplicial_holonomy.dpalg import DPPoly
from simplicial_holonomy.linfty import abelian
from simplicial_holonomy.simplicial import global_form, simplex


def test_simplex_category_two_word():
    A = simplex_category(2)
    assert A.D({((0, 1), (1, 2)): 1}) == {((0, 2),): -1}


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_simplex_category_square_zero_and_units(n):
    A = simplex_category(n)
    bad, checked = A.check_square_zero(4)
    assert bad == [] and checked
    assert A.check_units() == []


def test_cosimplicial_relabeling():
    F = cosimplicial_map((0, 2), 1, 2)
    assert F.apply({((0, 1),): 1}) == {((0, 2),): 1}


def test_cosimplicial_functoriality():
    assert check_cosimplicial(3, 3) == []


def test_trivial_algebra_has_only_units():
    A = table_category(["*"], {"1": ("*", "*", 0)}, {("1", "1"): {"1": -1}}, units={"*": "1"})
    assert A.check_square_zero(3)[0] == []
    assert A.check_units() == []


def test_exterior_algebra():
    E = exterior_algebra()
    assert check_dg_algebra(*E) == []
    A = from_dg_algebra(*E, unit=())
    assert A.check_square_zero(4)[0] == []
    assert A.check_units() == []


def test_broken_associativity_is_caught():
    basis, degs, d, mul = exterior_algebra()

    def bad_mul(a, b):
        out = mul(a, b)
        if a == () and b == (0,):
            return {k: 2 * v for k, v in out.items()}
        return out
    assert check_dg_algebra(basis, degs, d, bad_mul)
    assert from_dg_algebra(basis, degs, d, bad_mul, unit=()).check_square_zero(3)[0]


def test_gtheta_square_zero_sampled():
    B = gtheta_category(abelian(["e", "f"], [0, 0]), 3, 3, 1)
    rng = random.Random(1)
    bs = B.basis()
    words = [tuple(rng.choice(bs) for _ in range(L)) for L in (1, 2, 3) for _ in range(150)]
    assert B.check_square_zero(words=words)[0] == []


def test_unitalization_signs():
    U = unitalize(simplex_category(2))
    assert U.D({(("id", 0), ("id", 0)): 1}) == {(("id", 0),): -1}


def test_unitalization_adjoins_new_units():
    A = simplex_category(2)
    U = unitalize(A)
    # the old identities stay ordinary arrows
    assert set(U.units.values()) == {("id", i) for i in range(3)}
    assert all(("id", i) not in A.basis() for i in range(3))
    assert U.check_square_zero(4)[0] == []
    assert U.check_units() == []


def test_unitalization_of_exterior_algebra():
    U = unitalize(from_dg_algebra(*exterior_algebra(), unit=()))
    assert U.check_square_zero(3)[0] == []


def test_unitalization_extension_preserves_units():
    A = simplex_category(1)
    F = cosimplicial_map((0, 1), 1, 1)
    Ubar = unitalize(A)
    G = extend_to_unitalization(F, Ubar)
    assert G.check_units() == []
    assert G.check(Ubar.words(3)) == []


def test_json_round_trip():
    A = simplex_category(2)
    obj = json.loads(json.dumps(to_json(A)))
    B = from_json(obj)
    assert B.check_square_zero(3)[0] == []
    assert to_json(B) == obj


def test_free_model_on_single_arrow():
    Q = DGQuiver([0, 1], {"a": (0, 1, 0)})
    FQ = free_on_quiver(Q, 4)
    assert FQ.check_square_zero(words=exact_words(FQ, 3))[0] == []


def test_free_model_with_differential():
    Q = DGQuiver([0, 1], {"a": (0, 1, 1), "b": (0, 1, 0), "c": (1, 1, 0)}, {"a": {"b": 1}})
    assert Q.check() == []
    FQ = free_on_quiver(Q, 4)
    bad, checked = FQ.check_square_zero(words=exact_words(FQ, 3))
    assert bad == [] and checked


def test_quiver_differential_shape_checked():
    Q = DGQuiver([0, 1], {"a": (0, 1, 1), "b": (1, 1, 0)}, {"a": {"b": 1}})
    assert Q.check()


def test_builder_on_identity():
    Q = DGQuiver([0], {"a": (0, 0, 0)})
    FQ = free_on_quiver(Q, 3)
    leaf = next(t for t in FQ.basis() if t[0] == "leaf")
    F = free_builder(FQ, FQ, lambda v: v, lambda a: {("leaf", a): 1})
    assert F.F1(leaf) == {leaf: 1}


def test_path_quiver_of_simplex():
    Q, _ = path_quiver(simplex(2, cap=3), 0, 0)
    pairs = sorted((a[0][0], a[1][0]) for a in Q.arrows)
    assert pairs == [(i, j) for i in range(3) for j in range(i, 3)]
    assert all(v[2] == 0 for v in Q.arrows.values())


def test_pi_is_a_quiver_morphism_and_extends():
    Q, phi = pi_map(2)
    A = simplex_category(2)
    assert check_quiver_morphism(Q, A, phi) == []
    FQ = free_on_quiver(Q, 3)
    P = free_builder(FQ, A, lambda v: v[0], phi)
    words = exact_words(FQ, 3)
    assert words and P.check(words) == []


def test_nerve_zero_simplex():
    B = gtheta_category(abelian(["e", "f"], [0, 0]), 3, 3, 1)
    assert nerve_validate({"objects": ["*"], "arrows": {(0, 0): {((), 0): 1}}}, B, 0)["ok"]


def test_nerve_toy_triangle():
    alg = abelian(["e", "f"], [0, 0])
    B = gtheta_category(alg, 3, 3, 1)
    fam = toy_nerve_family(alg)
    assert nerve_validate(fam, B, 2)["ok"]
    for key in [(0, 1), (0, 2), (1, 2)]:
        for term in fam["arrows"][key]:
            bad = copy.deepcopy(fam)
            bad["arrows"][key][term] *= -1
            assert not nerve_validate(bad, B, 2)["ok"]


def test_nerve_rejects_non_unit():
    alg = abelian(["e", "f"], [0, 0])
    B = gtheta_category(alg, 3, 3, 1)
    fam = toy_nerve_family(alg)
    fam["arrows"][(1, 1)] = {((), 0): 2}
    res = nerve_validate(fam, B, 2)
    assert not res["ok"] and res["violation"]["kind"] == "unit"


def _connection(n, terms):
    X = simplex(n, cap=n)
    g = GForm.zero(n, 3, (0, 0))
    for f, i, letter in terms:
        g = g + GForm.from_poly(f, (i,), ((letter,),), 3, (0, 0))
    return global_form(X, g).to_form_map()


def test_ahol_commutes_with_D():
    nab = _connection(2, [(DPPoly.var(2, 1), 1, 0), (DPPoly.const(2, 2), 2, 1)])
    FQ, B, F, table = ahol(2, nab, abelian(["e", "f"], [0, 0]), W=3)
    words = exact_words(FQ, 3)
    assert words and F.check(words) == []
    # identities go to the unit
    for a, v in table.items():
        if a[0] == a[1]:
            assert v == {((), 0): 1}


def test_ahol_zero_connection_is_constant():
    nab = _connection(1, [])
    FQ, B, F, table = ahol(1, nab, abelian(["e", "f"], [0, 0]), W=3)
    assert all(v == {((), 0): 1} for v in table.values())
    assert F.check(exact_words(FQ, 3)) == []
