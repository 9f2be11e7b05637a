import random

import pytest
import sympy

from simplicial_holonomy.derham import GForm
from simplicial_holonomy.dpalg import DPPoly, random_poly, to_rational
from simplicial_holonomy.holonomy import (Cochain, boundary, c_sign, chain_map_residual,
                                          chain_map_suite, cochain_of, de_rham,
                                          diff_formula_residual, differential_suite,
                                          exponential_check, hol, hol_naturality,
                                          iterated_integral, pair, unit_cochain)
from simplicial_holonomy.integrate import random_gform, sample_algebras
from simplicial_holonomy.simplicial import endpoint, global_form, path_space, simplex

E = ((0,),)


def interval_setup(W=4):
    X = simplex(1, cap=2)
    PX = path_space(X, cap=1)
    nabla = global_form(X, GForm.from_poly(DPPoly.const(1), (1,), E, W, (0,))).to_form_map()
    gamma = next(g for g in PX.simplices(0)
                 if endpoint(PX, 0)(g) == (0,) and endpoint(PX, 1)(g) == (1,))
    return X, PX, nabla, gamma


def theta_power(r, word, W=4):
    return GForm.from_poly(DPPoly.bound_power(0, 0, r), (), word, W, (0,))


def test_empty_iterated_integral_is_unit():
    X, PX, nabla, gamma = interval_setup()
    assert iterated_integral(PX, gamma, [], 4, (0,)) == GForm.one(0, 4, (0,))


def test_single_iterated_integral():
    X, PX, nabla, gamma = interval_setup()
    assert iterated_integral(PX, gamma, [nabla]) == theta_power(1, E)


def test_double_iterated_integral():
    X, PX, nabla, gamma = interval_setup()
    val = iterated_integral(PX, gamma, [nabla, nabla])
    assert val == theta_power(2, E * 2)
    f = val.component(word=E * 2, dx=())
    t = sympy.Symbol("t")
    assert to_rational(f, (t,)) == t**2 / 2


def test_c_sign_examples():
    assert c_sign([1]) == 1
    assert c_sign([1, 1]) == 1
    assert c_sign([2, 1]) == -1
    assert c_sign([]) == 1


def test_exponential():
    ok, rational_ok, val = exponential_check(8)
    assert ok and rational_ok


def test_exponential_against_sympy():
    X, PX, nabla, gamma = interval_setup(W=7)
    val = hol(PX, gamma, nabla, 6)((0,))
    t = sympy.Symbol("t")
    for r in range(7):
        f = val.component(word=E * r, dx=())
        assert to_rational(f, (t,)) == t**r / sympy.factorial(r)


def test_zero_connection_is_unit():
    X, PX, _, gamma = interval_setup()
    zero = global_form(X, GForm.zero(1, 4, (0,))).to_form_map()
    val = hol(PX, gamma, zero, 4)
    assert val((0,)) == GForm.one(0, 4, (0,))


def test_order_zero_is_unit():
    X, PX, nabla, gamma = interval_setup()
    assert hol(PX, gamma, nabla, 0)((0,)) == GForm.one(0, 4, (0,))


def test_constant_paths_are_unit():
    X, PX, nabla, _ = interval_setup()
    for g in PX.simplices(0):
        if endpoint(PX, 0)(g) == endpoint(PX, 1)(g):
            assert hol(PX, g, nabla, 4)((0,)) == GForm.one(0, 4, (0,))


def test_hol_naturality_on_faces():
    X = simplex(2, cap=3)
    PX = path_space(X, cap=1)
    rng = random.Random(0)
    alg = sample_algebras()[0]
    g = random_gform(rng, 2, alg, 3, form_degree=1, max_len=1)
    nabla = global_form(X, g).to_form_map()
    for gamma in PX.nondegenerate(1):
        for alpha in [(0,), (1,), (0, 0), (1, 1)]:
            res = hol_naturality(PX, gamma, nabla, 2, alpha)
            assert not any(res.values.values())


def test_differential_formula_zero_forms():
    X = simplex(1, cap=3)
    PX = path_space(X, cap=1)
    zero = global_form(X, GForm.zero(1, 3, (0, 1))).to_form_map()
    for gamma in PX.nondegenerate(1):
        assert not diff_formula_residual(PX, gamma, [zero, zero])


def test_differential_formula_single_constant():
    X = simplex(1, cap=3)
    PX = path_space(X, cap=1)
    nabla = global_form(X, GForm.from_poly(DPPoly.const(1), (1,), E, 3, (0, 1))).to_form_map()
    for k in (0, 1):
        for gamma in PX.nondegenerate(k):
            assert not diff_formula_residual(PX, gamma, [nabla])


def test_differential_suite():
    checked, failures = differential_suite(trials=3, seed=11)
    assert checked and failures == []


def test_point_pairing():
    f = DPPoly.var(0, 0, 2, 5)
    g = GForm.from_poly(f, (), (), 3)
    assert pair(g, 0) == g


def test_boundary_squares_to_zero():
    X = simplex(3, cap=3)
    for q in range(4):
        for x in X.nondegenerate(q):
            assert boundary(X, boundary(X, {x: 1})) == {}


def test_chain_map_suite():
    checked, failures = chain_map_suite(count=10, seed=3)
    assert checked and failures == []


def test_de_rham_linear():
    rng = random.Random(1)
    X = simplex(2, cap=2)
    omega = global_form(X, random_gform(rng, 2, sample_algebras()[1], 3)).to_form_map()
    a, b = (0, 1), (1, 2)
    assert de_rham(omega, {a: 2, b: -1}) == de_rham(omega, {a: 1}).scale(2) - de_rham(omega, {b: 1})


def _random_cochain(rng, n, alg):
    return cochain_of(random_gform(rng, n, alg, 3, nterms=4), n)


def test_cup_examples():
    # AW on a 2-simplex sums the front-back splittings
    X = simplex(2, cap=2)
    one = GForm.one(0, 3, ())
    a = Cochain(X, {(0, 1): one}, 3)
    b = Cochain(X, {(1, 2): one}, 3)
    c = a.cup(b)
    assert c((0, 1, 2)) == one
    assert not c((0, 2))


def test_cup_associative_and_unital():
    rng = random.Random(4)
    for alg in sample_algebras():
        a, b, c = (_random_cochain(rng, 2, alg) for _ in range(3))
        assert (a.cup(b)).cup(c) == a.cup(b.cup(c))
        u = unit_cochain(a.X, a.W, a.degs)
        assert u.cup(a) == a and a.cup(u) == a
