"""Chain integrals, fiberwise integration and the Stokes residual.

A form on a product X x U is handled through its families: for simplices
x of X (dimension n) and u of U (dimension r), family(x, u) is the dict
{Gamma: GForm on Delta^{n+r}} over the maximal chains of [n] x [r], the
pullback of the form along (x x u) o Gamma.
"""

from __future__ import annotations

import itertools

from .chains import Chain, enumerate_maximal, pushforward_pair
from .derham import GForm, compose, delta, identity, merge_sign, sigma, word_degree
from .dpalg import THETA, ZERO, DPPoly, definite_integral, pullback_index, random_poly
from .simplicial import family_pullback, re_form


def chain_integral(omega, chain, koszul=True):
    """Integral over the fiber of a global chain [p] -> [n] x [r].

    The k = p - n fiber integrations pass the env word with sign
    (-1)^{k |w|} (dropped when koszul=False).
    """
    if not chain.is_global():
        raise ValueError(f"chain {chain.points} is not global")
    if omega.n != chain.p:
        raise ValueError(f"form lives on Delta^{omega.n}, chain has p = {chain.p}")
    an = chain.analysis
    p, n = chain.p, chain.n
    Fs, us = an.Fs, an.us
    fs_set = set(Fs)
    out = GForm.zero(n, omega.W, omega.degs)
    for (w, S), f in omega.components().items():
        if not fs_set <= set(S):
            continue
        base = tuple(s for s in S if s not in fs_set)
        sign = merge_sign(Fs, base)
        if koszul and len(Fs) & 1 and word_degree(w, omega.degs) & 1:
            sign = -sign
        g = f
        for i, v in enumerate(Fs):
            lower = v + 1 if v + 1 <= p else ZERO
            g = definite_integral(g, v, lower, us[i])
            if not g:
                break
        if not g:
            continue
        piece = GForm.from_poly(g, base, w, omega.W, omega.degs, sign)
        out = out + piece.pullback(an.bs)
    return out


def swap(chain):
    return Chain(chain.r, chain.n, tuple((b, a) for a, b in chain.points))


def fiber_family_pullback(family, beta, n, r):
    """(id x beta)^* of a family over [n] x [r], for beta: [s] -> [r]."""
    s = len(beta) - 1
    out = {}
    for P in enumerate_maximal(n, s):
        c1, b = pushforward_pair(swap(P), beta, r)
        out[P] = family[swap(c1)].pullback(b)
    return out


def ez_family(family, n, r):
    """(sigma, core family, m) with family = (sigma x id)^* core."""
    surj = identity(n)
    fam, m = family, n
    while True:
        for j in range(m):
            e = compose(delta(m, j), sigma(m - 1, j))
            if family_pullback(fam, e, m, r) == fam:
                fam = family_pullback(fam, delta(m, j), m, r)
                surj = compose(sigma(m - 1, j), surj)
                m -= 1
                break
        else:
            return surj, fam, m


def fiberwise(family, n, r):
    """Fiberwise integral along Delta^n x Delta^r -> Delta^n."""
    surj, core, m = ez_family(family, n, r)
    some = next(iter(family.values()))
    out = GForm.zero(m, some.W, some.degs)
    for c in enumerate_maximal(m, r):
        out = out + chain_integral(core[c], c)
    return out.pullback(surj)


# product-coordinate forms on Delta^n x Delta^r

def bi_action(form, x, u, n, r):
    """Pullback of a product-coordinate form along x x u for ordinal maps
    x: [k] -> [n], u: [s] -> [r]."""
    k, s = len(x) - 1, len(u) - 1
    img = [0] + [pullback_index(x, i) for i in range(1, n + 1)]
    for i in range(1, r + 1):
        j = pullback_index(u, i)
        img.append(ZERO if j == ZERO else (0 if j == 0 else k + j))
    # f_i hitting f-slot 0 of the target means the theta-like vertex 0 of
    # Delta^s; the base coordinate convention treats it as theta as well.
    return form.remap(img, k + s)


class ProductCoordForm:
    """A form on Delta^n x Delta^r given in coordinates b_1..b_n, f_1..f_r."""

    def __init__(self, form, n, r):
        if form.n != n + r:
            raise ValueError("product form must live in n + r slots")
        self.form, self.n, self.r = form, n, r

    def family(self, x, u):
        g = bi_action(self.form, x, u, self.n, self.r)
        k, s = len(x) - 1, len(u) - 1
        return {c: re_form(c, g) for c in enumerate_maximal(k, s)}

    def d(self):
        return ProductCoordForm(self.form.d(), self.n, self.r)

    @property
    def W(self):
        return self.form.W

    @property
    def degs(self):
        return self.form.degs


class ProductFormMap:
    """A FormMap on ProductSet(X, U) seen through its families."""

    def __init__(self, fm):
        self.fm = fm
        self.X, self.U = fm.domain.X, fm.domain.U
        self.W, self.degs = fm.W, fm.degs

    def family(self, x, u):
        X, U = self.X, self.U
        k, s = X.dim(x), U.dim(u)
        out = {}
        for c in enumerate_maximal(k, s):
            out[c] = self.fm.evaluate((X.act(x, c.cb), U.act(u, c.cf)))
        return out

    def d(self):
        from .simplicial import FormMap
        return ProductFormMap(FormMap(self.fm.domain,
                                      {k: v.d() for k, v in self.fm.assignment.items()},
                                      self.fm.W, self.fm.degs, self.fm.max_dim))


def _x_simplices(X, max_dim):
    for k in range(max_dim + 1):
        yield from X.nondegenerate(k)


def support(X, U, form, x_dim=None):
    """supp_{pr_X}: nondegenerate u whose restriction (id x u)^* form is a
    nondegenerate simplex of [X, forms]."""
    x_dim = X.cap if x_dim is None else x_dim
    xs = list(_x_simplices(X, x_dim))
    out = []
    for r in range(U.cap + 1):
        for u in U.nondegenerate(r):
            degenerate = False
            for h in range(r):
                uh = U.act(u, compose(delta(r, h), sigma(r - 1, h)))
                if all(form.family(x, uh) == form.family(x, u) for x in xs):
                    degenerate = True
                    break
            if not degenerate:
                out.append(u)
    return out


def part(X, U, form, x_dim=None):
    """Maximal elements of the support under u1 <= u2 iff u1 = u2 . delta."""
    supp = support(X, U, form, x_dim)
    below = set()
    for u2 in supp:
        r2 = U.dim(u2)
        for r1 in range(r2):
            for d in itertools.combinations(range(r2 + 1), r1 + 1):
                below.add(U.act(u2, d))
    return [u for u in supp if u not in below]


def fiberwise_general(X, U, form, x_dim=None, parts=None):
    """{x: GForm} for every nondegenerate x of X up to x_dim."""
    x_dim = X.cap if x_dim is None else x_dim
    parts = part(X, U, form, x_dim) if parts is None else parts
    out = {}
    for x in _x_simplices(X, x_dim):
        k = X.dim(x)
        acc = GForm.zero(k, form.W, form.degs)
        for u in parts:
            acc = acc + fiberwise(form.family(x, u), k, U.dim(u))
        out[x] = acc
    return out


def boundary_fiberwise(X, U, form, x_dim=None, signed=True, parts=None):
    """Sum over u in part and faces i of the fiberwise integral of
    (id x u delta_i)^* form, with sign (-1)^i when signed."""
    x_dim = X.cap if x_dim is None else x_dim
    parts = part(X, U, form, x_dim) if parts is None else parts
    out = {}
    for x in _x_simplices(X, x_dim):
        k = X.dim(x)
        acc = GForm.zero(k, form.W, form.degs)
        for u in parts:
            r = U.dim(u)
            for i in range(r + 1 if r else 0):
                ui = U.act(u, delta(r, i))
                term = fiberwise(form.family(x, ui), k, r - 1)
                acc = acc + (term.scale(-1) if signed and i & 1 else term)
        out[x] = acc
    return out


def stokes_residual(X, U, form, x_dim=None, signed=True, own_part=False):
    """{x: residual} with residual = fint d(w) - bint(w) - sum (-1)^r d fint((id x u)^* w).

    By default fint d(w) is taken over part(w); own_part=True uses part(d w).
    """
    x_dim = X.cap if x_dim is None else x_dim
    parts = part(X, U, form, x_dim)
    dform = form.d()
    lhs = fiberwise_general(X, U, dform, x_dim, None if own_part else parts)
    bnd = boundary_fiberwise(X, U, form, x_dim, signed, parts)
    out = {}
    for x in _x_simplices(X, x_dim):
        k = X.dim(x)
        acc = lhs[x] - bnd[x]
        for u in parts:
            r = U.dim(u)
            term = fiberwise(form.family(x, u), k, r).d()
            acc = acc - (term.scale(-1) if r & 1 else term)
        out[x] = acc
    return out


def stokes_on_product(form, n, r, signed=True, own_part=False):
    """Residual of Stokes's theorem for a product-coordinate form on the top
    simplex, with U = Delta^r (part = the top fiber simplex when the
    restriction is nondegenerate)."""
    from .simplicial import simplex
    X, U = simplex(n, cap=n), simplex(r, cap=r)
    return stokes_residual(X, U, form, signed=signed, own_part=own_part)


# random forms

def random_word(rng, alg, max_len=2, max_weight=2):
    letters = alg.letters(max_weight)
    return tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))


def random_gform(rng, nvars, alg=None, W=3, degree=3, nterms=3, coeff=5, max_len=2,
                 form_degree=None):
    degs = alg.degs if alg is not None else ()
    out = GForm.zero(nvars, W, degs)
    for _ in range(nterms):
        f = random_poly(rng, nvars, degree, 2, coeff)
        q = rng.randint(0, nvars) if form_degree is None else form_degree
        S = tuple(sorted(rng.sample(range(1, nvars + 1), min(q, nvars))))
        w = random_word(rng, alg, max_len) if alg is not None and alg.rank else ()
        out = out + GForm.from_poly(f, S, w, W, degs)
    return out


def check_naturality(family, n, r, mmax=3):
    """alpha^* fint w == fint (alpha x id)^* w for all ordinal alpha: [m] -> [n]."""
    from .derham import ordinal_maps
    bad = []
    base = fiberwise(family, n, r)
    for m in range(mmax + 1):
        for a in ordinal_maps(m, n):
            lhs = base.pullback(a)
            rhs = fiberwise(family_pullback(family, a, n, r), m, r)
            if lhs != rhs:
                bad.append((a, lhs, rhs))
    return bad


def check_fiber_degenerate(family, n, r):
    """fint (id x sigma_h)^* w == 0 for every fiber degeneracy sigma_h: [r+1] -> [r]."""
    bad = []
    for h in range(r + 1):
        fam = fiber_family_pullback(family, sigma(r, h), n, r)
        val = fiberwise(fam, n, r + 1)
        if val:
            bad.append((h, val))
    return bad


# seeded random suite

def sample_algebras():
    """The rank-2 abelian and rank-3 nilpotent coefficient algebras."""
    from .linfty import abelian, from_dg_lie
    return [abelian(["e", "f"], [0, 0]),
            from_dg_lie(["a", "b", "c"], [0, 1, 1], {}, {("a", "b"): {"c": 1}})]


def stokes_suite(count=100, seed=7, n=None, r=None, nmax=3, rmax=3, W=3, max_len=2,
                 signed=True, own_part=False):
    """Stokes residual on `count` random forms on Delta^n x Delta^r (n, r drawn
    up to nmax, rmax when not given).  Returns (passed, failures)."""
    import random
    rng = random.Random(seed)
    algs = sample_algebras()
    passed, failures = 0, []
    for k in range(count):
        nn = rng.randint(0, nmax) if n is None else n
        rr = rng.randint(0, rmax) if r is None else r
        alg = algs[k % len(algs)]
        g = random_gform(rng, nn + rr, alg, W, degree=3, nterms=3, coeff=5, max_len=max_len)
        res = stokes_on_product(ProductCoordForm(g, nn, rr), nn, rr, signed, own_part)
        bad = {x: v for x, v in res.items() if v}
        if bad:
            failures.append((nn, rr, g, bad))
        else:
            passed += 1
    return passed, failures
