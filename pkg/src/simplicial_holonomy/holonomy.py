"""Iterated integrals on path spaces, the de Rham pairing, cochains with the
Alexander-Whitney cup product, and truncated holonomy series.

Path-space simplices are those of `simplicial.path_space(X, cap)`: an
n-simplex gamma is a map Delta^1 x Delta^n -> X, and gamma(t, i) below means
the vertex (t, i) of the poset [1] x [n].
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial

from .chains import Chain, enumerate_maximal
from .derham import GForm, delta, word_degree
from .integrate import chain_integral, fiberwise
from .simplicial import FormMap, endpoint, global_form, path_space, simplex


def _s(j):
    # component j of [r] -> [1]^r, i -> (1,..,1 (i times), 0,..)
    return lambda t: 1 if t >= j else 0


def phi_family(PX, gamma, forms, r):
    """Family over [n] x [r] of phi_r^*(pr_1^* w_1 ^ ... ^ pr_r^* w_r)."""
    n = PX.dim(gamma)
    W = forms[0].W if forms else 4
    degs = forms[0].degs if forms else ()
    cache = {}
    out = {}
    for c in enumerate_maximal(n, r):
        acc = GForm.one(n + r, W, degs)
        for j, w in enumerate(forms, start=1):
            s = _s(j)
            seq = tuple((s(c.cf[i]), c.cb[i]) for i in range(n + r + 1))
            key = (j, seq)
            if key not in cache:
                cache[key] = w.evaluate(PX.value(gamma, seq))
            acc = acc.wedge(cache[key])
        out[c] = acc
    return out


def iterated_integral(PX, gamma, forms, W=None, degs=None):
    """(int w_1 ... w_r)(gamma) as a GForm on Delta^n."""
    n = PX.dim(gamma)
    r = len(forms)
    if r == 0:
        return GForm.one(n, W or 4, degs or ())
    return fiberwise(phi_family(PX, gamma, forms, r), n, r)


def c_sign(degrees):
    r = len(degrees)
    e = sum((r - i) * (d - 1) for i, d in enumerate(degrees, start=1))
    return -1 if e & 1 else 1


def c_map(PX, gamma, forms):
    """C(w_1[-1] (x) ... (x) w_r[-1]) on gamma, without the outer shift."""
    degrees = [w_degree(w) for w in forms]
    val = iterated_integral(PX, gamma, forms)
    return val.scale(-1) if c_sign(degrees) < 0 else val


def w_degree(form_map, grading="total"):
    if grading == "form":
        ds = {S_len for g in form_map.assignment.values() for S_len in
              {len(S) for (w, S, m) in g.terms}}
    else:
        ds = form_map.degrees()
    if len(ds) > 1:
        raise ValueError(f"form is not homogeneous: degrees {sorted(ds)}")
    return next(iter(ds)) if ds else 0


def _wedge_maps(a, b):
    D = a.domain
    assignment = {}
    for n in range(a.max_dim + 1):
        for x in D.nondegenerate(n):
            assignment[x] = a.evaluate(x).wedge(b.evaluate(x))
    return FormMap(D, assignment, a.W, a.degs, a.max_dim)


def _d_map(a):
    return FormMap(a.domain, {k: v.d() for k, v in a.assignment.items()}, a.W, a.degs, a.max_dim)


def diff_formula_residual(PX, gamma, forms, grading="total"):
    """LHS - RHS of the differential formula for d int w_1 ... w_r on gamma."""
    r = len(forms)
    n = PX.dim(gamma)
    W, degs = forms[0].W, forms[0].degs
    X = PX.X
    degrees = [w_degree(w, grading) for w in forms]
    lhs = iterated_integral(PX, gamma, forms).d()
    rhs = GForm.zero(n, W, degs)
    for i in range(r):
        e = sum(degrees[:i]) + r
        t = iterated_integral(PX, gamma, forms[:i] + [_d_map(forms[i])] + forms[i + 1:])
        rhs = rhs + (t.scale(-1) if e & 1 else t)
    for i in range(r - 1):
        e = r - 1 - (i + 1)
        merged = _wedge_maps(forms[i], forms[i + 1])
        t = iterated_integral(PX, gamma, forms[:i] + [merged] + forms[i + 2:])
        rhs = rhs + (t.scale(-1) if e & 1 else t)
    if r:
        e1 = forms[0].evaluate(endpoint(PX, 1)(gamma))
        t = e1.wedge(iterated_integral(PX, gamma, forms[1:], W, degs))
        rhs = rhs + (t.scale(-1) if ((r - 1) * (degrees[0] - 1)) & 1 else t)
        e0 = forms[-1].evaluate(endpoint(PX, 0)(gamma))
        rhs = rhs - iterated_integral(PX, gamma, forms[:-1], W, degs).wedge(e0)
    return lhs - rhs


# de Rham map and cochains

def pair(form, q):
    """<form, id_{Delta^q}>: integral of a GForm on Delta^q over the simplex."""
    c = Chain(0, q, tuple((0, i) for i in range(q + 1)))
    return chain_integral(form, c)


def de_rham(omega, chain):
    """<omega, sum m_x x> for a FormMap omega and a dict {simplex: m}."""
    D = omega.domain
    out = GForm.zero(0, omega.W, omega.degs)
    for x, m in chain.items():
        out = out + pair(omega.evaluate(x), D.dim(x)).scale(m)
    return out


def boundary(X, chain):
    out = {}
    for x, m in chain.items():
        n = X.dim(x)
        if n == 0:
            continue
        for i in range(n + 1):
            y = X.face(x, i)
            out[y] = out.get(y, 0) + (-m if i & 1 else m)
    return {y: m for y, m in out.items() if m}


def chain_map_residual(omega, x):
    """int_x d(omega) - int_{boundary x} omega."""
    return de_rham(_d_map(omega), {x: 1}) - de_rham(omega, boundary(omega.domain, {x: 1}))


class Cochain:
    """Values in U (x) Z<theta> (GForms on Delta^0) on simplices of a poset
    nerve or standard simplex; simplices missing from the table are 0."""

    def __init__(self, X, values, W=4, degs=()):
        self.X = X
        self.W, self.degs = W, tuple(degs)
        self.values = {x: v for x, v in values.items() if v}

    def __call__(self, x):
        return self.values.get(x, GForm.zero(0, self.W, self.degs))

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.values == other.values

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return Cochain(self.X, {k: self(k) + other(k) for k in keys}, self.W, self.degs)

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return Cochain(self.X, {k: self(k) - other(k) for k in keys}, self.W, self.degs)

    def cup(self, other):
        """Alexander-Whitney: (a cup b)(x) = sum_p +- a(x|0..p) b(x|p..n)."""
        X = self.X
        vals = {}
        for n in range(X.cap + 1):
            for x in X.simplices(n):
                acc = GForm.zero(0, self.W, self.degs)
                for p in range(n + 1):
                    front = X.act(x, tuple(range(p + 1)))
                    back = X.act(x, tuple(range(p, n + 1)))
                    a, b = self(front), other(back)
                    if not a or not b:
                        continue
                    acc = acc + _cochain_mul(a, p, b)
                vals[x] = acc
        return Cochain(X, vals, self.W, self.degs)

    def pullback(self, Y, f):
        """Precomposition with a simplicial map f: Y -> X."""
        vals = {}
        for n in range(Y.cap + 1):
            for y in Y.simplices(n):
                vals[y] = self(f(y))
        return Cochain(Y, vals, self.W, self.degs)

    def to_json(self):
        return {"v": 1, "values": [{"simplex": list(x), "value": v.to_json()}
                                   for x, v in sorted(self.values.items())]}

    def __repr__(self):
        return "Cochain(" + ", ".join(f"{x}: {v}" for x, v in sorted(self.values.items())) + ")"


def _cochain_mul(a, p, b):
    # Koszul sign from moving a p-cochain past the word of b
    out = GForm.zero(0, a.W, a.degs)
    for (w, S, m), c in b.terms.items():
        s = -1 if (p * word_degree(w, b.degs)) & 1 else 1
        out = out + a.wedge(b._new({(w, S, m): s * c}))
    return out


def unit_cochain(X, W=4, degs=()):
    return Cochain(X, {x: GForm.one(0, W, degs) for x in X.simplices(0)}, W, degs)


def cochain_of(form, n, W=None, degs=None):
    """The cochain y -> <form|_y, y> on Delta^n for a GForm on Delta^n."""
    X = simplex(n, cap=n)
    vals = {}
    for k in range(n + 1):
        for y in X.simplices(k):
            vals[y] = pair(form.pullback(y), k)
    return Cochain(X, vals, form.W, form.degs)


def hol(PX, gamma, nabla, R):
    """sum_{r <= R} of the cochain of int nabla ... nabla (r times) on gamma."""
    n = PX.dim(gamma)
    total = GForm.zero(n, nabla.W, nabla.degs)
    for r in range(R + 1):
        total = total + iterated_integral(PX, gamma, [nabla] * r, nabla.W, nabla.degs)
    return cochain_of(total, n)


def hol_naturality(PX, gamma, nabla, R, alpha):
    """hol(gamma . alpha) - alpha^* hol(gamma), as a Cochain on Delta^m."""
    m = len(alpha) - 1
    lhs = hol(PX, PX.act(gamma, alpha), nabla, R)
    rhs = hol(PX, gamma, nabla, R).pullback(simplex(m, cap=m),
                                             lambda y: tuple(alpha[i] for i in y))
    return lhs - rhs


def exponential_check(R=8):
    """hol of e (x) dx_1 on the tautological path of Delta^1 against
    sum_r e^r (x) theta^[r]; returns (ok, rational ok, hol value)."""
    from .dpalg import DPPoly
    X = simplex(1, cap=2)
    PX = path_space(X, cap=1)
    W = R + 1
    nabla = global_form(X, GForm.from_poly(DPPoly.const(1, 1), (1,), ((0,),), W, (0,))).to_form_map()
    gamma = next(g for g in PX.simplices(0)
                 if endpoint(PX, 0)(g) == (0,) and endpoint(PX, 1)(g) == (1,))
    val = hol(PX, gamma, nabla, R)((0,))
    expect = GForm.zero(0, W, (0,))
    for r in range(R + 1):
        expect = expect + GForm.from_poly(DPPoly.bound_power(0, 0, r), (), ((0,),) * r, W, (0,))
    ok = val == expect
    # rational embedding theta^[k] -> theta^k / k!, against sum theta^r / r!
    coeffs = {}
    for r in range(R + 1):
        for m, c in val.component(word=((0,),) * r, dx=()).terms.items():
            coeffs[m[0]] = coeffs.get(m[0], 0) + Fraction(c, factorial(m[0]))
    series = {r: Fraction(1, factorial(r)) for r in range(R + 1)}
    return ok, {k: v for k, v in coeffs.items() if v} == series, val


# random forms on standard simplices

def random_homogeneous(rng, X, n, alg, t, W=3, degree=2, nterms=2, coeff=5, max_len=1):
    """A FormMap on the nerve X = Delta^n, homogeneous of total degree t."""
    from .dpalg import random_poly
    degs = alg.degs
    out = GForm.zero(n, W, degs)
    words = [()] + [w for L in range(1, max_len + 1)
                    for w in itertools.product(alg.letters(1), repeat=L)]
    for _ in range(nterms):
        w = rng.choice(words)
        q = t + word_degree(w, degs)
        if not 0 <= q <= n:
            continue
        S = tuple(sorted(rng.sample(range(1, n + 1), q)))
        f = random_poly(rng, n, degree, 2, coeff)
        out = out + GForm.from_poly(f, S, w, W, degs)
    return global_form(X, out).to_form_map()


def differential_suite(trials=8, seed=11, spaces=(1, 2), rmax=3, path_dims=(0, 1)):
    """Residual of the differential formula for random homogeneous forms of
    total degree 0 or 1 on X = Delta^n, n in spaces, r = 1..rmax, over all
    path simplices of the given dimensions.  Returns (checked, failures)."""
    from .linfty import abelian
    rng = random.Random(seed)
    alg = abelian(["e", "f"], [0, 1])
    checked, failures = 0, []
    for nX in spaces:
        X = simplex(nX, cap=max(3, nX))
        PX = path_space(X, cap=max(path_dims))
        gammas = [g for k in path_dims for g in PX.nondegenerate(k)]
        for r in range(1, rmax + 1):
            for _ in range(trials):
                forms = [random_homogeneous(rng, X, nX, alg, rng.choice([0, 1]))
                         for _ in range(r)]
                for g in gammas:
                    checked += 1
                    res = diff_formula_residual(PX, g, forms)
                    if res:
                        failures.append((nX, r, g, res))
    return checked, failures


def chain_map_suite(count=40, seed=3, n=3):
    """int_x d(w) = int_{boundary x} w for random forms on Delta^n and every
    nondegenerate simplex x.  Returns (checked, failures)."""
    from .integrate import random_gform, sample_algebras
    rng = random.Random(seed)
    X = simplex(n, cap=n)
    algs = sample_algebras()
    checked, failures = 0, []
    for k in range(count):
        g = random_gform(rng, n, algs[k % 2], W=3, degree=3, nterms=3, coeff=5)
        omega = global_form(X, g).to_form_map()
        for q in range(n + 1):
            for x in X.nondegenerate(q):
                checked += 1
                res = chain_map_residual(omega, x)
                if res:
                    failures.append((g, x, res))
    return checked, failures
