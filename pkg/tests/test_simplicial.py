import json
import random

import pytest

from simplicial_holonomy.chains import enumerate_maximal
from simplicial_holonomy.derham import GForm
from simplicial_holonomy.dpalg import DPPoly
from simplicial_holonomy.integrate import random_gform
from simplicial_holonomy.simplicial import (CapError, FormMap, TableSet, check_face_nondegeneracy,
                                            check_inclusion_naturality, check_retraction,
                                            endpoint, ex_inclusion, ex_step, global_form,
                                            hom_space, materialize, path_space, product, simplex,
                                            validate_form_map)


def test_ez_examples():
    X = simplex(2, cap=3)
    assert X.ez((0, 1, 2)) == ((0, 1, 2), (0, 1, 2))
    assert X.ez(X.degeneracy((1,), 0)) == ((0, 0), (1,))
    a = X.degeneracy(X.degeneracy((0,), 0), 1)
    b = X.degeneracy(X.degeneracy((0,), 0), 0)
    assert X.ez(a) == X.ez(b) == ((0, 0, 0), (0,))


def test_product_examples():
    assert len(product(simplex(1, cap=2), simplex(1, cap=2), cap=2).nondegenerate(2)) == 2
    assert len(product(simplex(2, cap=3), simplex(1, cap=3), cap=3).nondegenerate(3)) == 3
    X = simplex(2, cap=3)
    assert product(X, simplex(0, cap=3), cap=3).counts(3) == X.counts(3)


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_product_cores_are_chains(n, r):
    P = product(simplex(n, cap=n + r), simplex(r, cap=n + r), cap=n + r)
    assert len(P.nondegenerate(n + r)) == len(enumerate_maximal(n, r))


def test_simplicial_identities():
    for X in (simplex(2, cap=3), product(simplex(1, cap=2), simplex(1, cap=2), cap=2),
              path_space(simplex(1, cap=3), cap=1), ex_step(simplex(1, cap=3), cap=1)):
        assert X.check_identities() == []
        assert X.check_functorial(min(X.cap, 2)) == []


def test_path_space_examples():
    assert len(path_space(simplex(1, cap=3), cap=1).simplices(0)) == 3
    assert path_space(simplex(0, cap=2), cap=1).counts(1) == [1, 0]
    X = simplex(2, cap=3)
    assert hom_space(X, (0,), (2,), cap=1).counts(1) == [1, 0]
    assert hom_space(X, (2,), (0,), cap=1).counts(1) == [0, 0]


def test_endpoints_are_simplicial():
    X = simplex(2, cap=3)
    PX = path_space(X, cap=1)
    for eps in (0, 1):
        E = endpoint(PX, eps)
        for g in PX.simplices(1):
            for i in range(2):
                assert E(PX.face(g, i)) == X.face(E(g), i)


def test_cap_is_enforced():
    with pytest.raises(CapError):
        path_space(simplex(1, cap=1), cap=1)
    with pytest.raises(CapError):
        simplex(1, cap=1).simplices(2)


def test_ex_examples():
    assert ex_step(simplex(0, cap=3), cap=1).counts(1) == [1, 0]
    E = ex_step(simplex(1, cap=3), cap=1)
    assert len(E.simplices(0)) == 2
    # order-preserving maps from {0 < 01 > 1} to [1]
    assert len(E.simplices(1)) == 5
    inc = ex_inclusion(simplex(1, cap=3), E)
    for x in simplex(1, cap=1).simplices(1):
        assert E.dim(inc(x)) == 1


def test_table_set_round_trip():
    T, ids = materialize(simplex(2, cap=3))
    T2 = TableSet.from_json(json.loads(json.dumps(T.to_json())))
    assert T2.counts(3) == simplex(2, cap=3).counts(3)
    assert T2.check_identities() == []


def test_validate_form_map_examples():
    X = simplex(1, cap=2)
    zero = FormMap(X, {}, 3, ())
    assert validate_form_map(zero)["ok"]
    e = GForm.from_poly(DPPoly.const(1), (1,), ((0,),), 3, (0,))
    assert validate_form_map(global_form(X, e).to_form_map())["ok"]
    bad = FormMap(X, {(0, 1): GForm.from_poly(DPPoly.var(1, 1)), (1,): GForm.zero(0)}, 3, ())
    report = validate_form_map(bad)
    assert not report["ok"]
    assert [m["face"] for m in report["mismatches"]] == [0]


def test_connection_degree():
    X = simplex(1, cap=2)
    e = GForm.from_poly(DPPoly.const(1), (1,), ((0,),), 3, (0,))
    assert global_form(X, e).to_form_map().is_connection()
    assert not global_form(X, GForm.one(1, 3, (0,))).to_form_map().is_connection()


@pytest.mark.parametrize("n,r", [(n, r) for n in range(4) for r in range(4)])
def test_inclusion_naturality(n, r):
    assert check_inclusion_naturality(n, r) == []


def test_retraction():
    rng = random.Random(2)
    for n in range(3):
        for r in range(3):
            forms = [random_gform(rng, n + r, None, W=1) for _ in range(3)]
            assert check_retraction(n, r, forms) == []


def test_face_nondegeneracy_counterexample():
    # x_1 x_2 is nondegenerate on Delta^2, its last face vanishes
    f = GForm.from_poly(DPPoly.var(2, 1) * DPPoly.var(2, 2))
    bad = check_face_nondegeneracy(2, 0, [f])
    assert [b[2] for b in bad] == ["degenerate face"]
