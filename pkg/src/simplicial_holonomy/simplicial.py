"""Finite simplicial sets, mapping spaces and forms on simplicial sets.

Every simplicial set here exposes the same small protocol:

    dim(x)            dimension of a simplex
    simplices(n)      all n-simplices (degenerate ones included), finite
    act(x, alpha)     x . alpha for an ordinal map alpha: [m] -> [dim x]

Ordinal maps are value tuples (alpha(0), ..., alpha(m)).  Faces and
degeneracies are act(x, delta_i) and act(x, sigma_j).  Each object carries a
dimension cap and raises CapError past it.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache

from .chains import Chain, enumerate_maximal, incl_slots, pushforward_pair
from .derham import GForm, compose, delta, identity, ordinal_maps, sigma
from .dpalg import DPPoly, ZERO, pullback_index


class CapError(ValueError):
    pass


def epi_mono(theta, k):
    """theta = iota o rho with rho surjective onto [l], iota injective into [k]."""
    img = sorted(set(theta))
    pos = {v: i for i, v in enumerate(img)}
    return tuple(pos[t] for t in theta), tuple(img)


def is_surjection(theta, k):
    return set(theta) == set(range(k + 1))


class SimplicialSet:
    cap = 0

    def _check_cap(self, n):
        if n > self.cap:
            raise CapError(f"dimension {n} exceeds cap {self.cap} of {self!r}")

    # derived operations

    def face(self, x, i):
        return self.act(x, delta(self.dim(x), i))

    def degeneracy(self, x, j):
        return self.act(x, sigma(self.dim(x), j))

    def is_degenerate(self, x):
        n = self.dim(x)
        for j in range(n):
            if self.act(x, compose(delta(n, j), sigma(n - 1, j))) == x:
                return True
        return False

    def ez(self, x):
        """(surjection sigma, nondegenerate core y) with x = y . sigma."""
        n = self.dim(x)
        surj = identity(n)
        y = x
        while True:
            k = self.dim(y)
            for j in range(k):
                if self.act(y, compose(delta(k, j), sigma(k - 1, j))) == y:
                    # y = (y d_j) s_j, and s_j acts by sigma(k-1, j)
                    surj = compose(sigma(k - 1, j), surj)
                    y = self.act(y, delta(k, j))
                    break
            else:
                return surj, y

    def nondegenerate(self, n):
        return [x for x in self.simplices(n) if not self.is_degenerate(x)]

    def check_identities(self, max_dim=None):
        """Simplicial identities on all simplices up to max_dim; returns a
        list of violations."""
        bad = []
        top = self.cap if max_dim is None else max_dim
        for n in range(0, top + 1):
            for x in self.simplices(n):
                for i in range(n + 1 if n >= 2 else 0):
                    for j in range(i + 1, n + 1):
                        a = self.face(self.face(x, j), i)
                        b = self.face(self.face(x, i), j - 1)
                        if a != b:
                            bad.append((x, "dd", i, j))
                for j in range(n):
                    y = self.degeneracy(x, j) if n + 1 <= self.cap else None
                    if y is None:
                        continue
                    if self.face(y, j) != x or self.face(y, j + 1) != x:
                        bad.append((x, "ds", j))
        return bad

    def check_functorial(self, max_dim=None):
        """(x . a) . b == x . (a o b) for all composable ordinal maps."""
        bad = []
        top = self.cap if max_dim is None else max_dim
        for n in range(top + 1):
            for x in self.simplices(n):
                for m in range(top + 1):
                    for a in ordinal_maps(m, n):
                        xa = self.act(x, a)
                        for l in range(top + 1):
                            for b in ordinal_maps(l, m):
                                if self.act(xa, b) != self.act(x, compose(a, b)):
                                    bad.append((x, a, b))
        return bad

    def counts(self, max_dim=None):
        top = self.cap if max_dim is None else max_dim
        return [len(self.nondegenerate(n)) for n in range(top + 1)]


class PosetNerve(SimplicialSet):
    """Nerve of a finite poset; an n-simplex is a monotone (n+1)-tuple."""

    def __init__(self, elements, leq, cap=3, name=None):
        self.elements = tuple(elements)
        self._leq = leq
        self.cap = cap
        self.name = name or f"N({len(self.elements)})"
        self._cache = {}

    def __repr__(self):
        return self.name

    def leq(self, a, b):
        return self._leq(a, b)

    def dim(self, x):
        return len(x) - 1

    def act(self, x, alpha):
        return tuple(x[a] for a in alpha)

    def simplices(self, n):
        self._check_cap(n)
        if n not in self._cache:
            out = []

            def rec(acc):
                if len(acc) == n + 1:
                    out.append(tuple(acc))
                    return
                for e in self.elements:
                    if not acc or self.leq(acc[-1], e):
                        acc.append(e)
                        rec(acc)
                        acc.pop()
            rec([])
            self._cache[n] = out
        return self._cache[n]

    def is_degenerate(self, x):
        return any(a == b for a, b in zip(x, x[1:]))

    def ez(self, x):
        core = [x[0]]
        surj = [0]
        for a in x[1:]:
            if a != core[-1]:
                core.append(a)
            surj.append(len(core) - 1)
        return tuple(surj), tuple(core)

    def maximal_chains(self):
        """Maximal strictly increasing chains, as tuples."""
        if "max" in self._cache:
            return self._cache["max"]
        lt = lambda a, b: a != b and self.leq(a, b)
        out = []

        def rec(acc):
            ext = [e for e in self.elements if lt(acc[-1], e)]
            ext = [e for e in ext if not any(lt(acc[-1], f) and lt(f, e) for f in self.elements)]
            if not ext:
                out.append(tuple(acc))
                return
            for e in ext:
                rec(acc + [e])
        for e in self.elements:
            if not any(lt(f, e) for f in self.elements):
                rec([e])
        self._cache["max"] = out
        return out

    def containing_chain(self, x):
        """(maximal chain C, positions alpha) with x = C . alpha."""
        for C in self.maximal_chains():
            pos = {c: i for i, c in enumerate(C)}
            if all(a in pos for a in x):
                return C, tuple(pos[a] for a in x)
        raise ValueError(f"{x} is not a simplex of {self.name}")


def simplex(n, cap=None):
    """The standard n-simplex as the nerve of [n]."""
    return PosetNerve(range(n + 1), lambda a, b: a <= b,
                      cap=n + 1 if cap is None else cap, name=f"Delta{n}")


def product_poset(n, r, cap=None):
    """The nerve of [n] x [r]; its maximal chains are the lattice paths."""
    els = [(a, b) for a in range(n + 1) for b in range(r + 1)]
    return PosetNerve(els, lambda x, y: x[0] <= y[0] and x[1] <= y[1],
                      cap=n + r if cap is None else cap, name=f"Delta{n}xDelta{r}")


def arrow_poset(nerve, cap=None):
    """The poset of pairs a <= b, ordered componentwise.  Its nerve is the
    path space [Delta^1, N(P)]."""
    els = [(a, b) for a in nerve.elements for b in nerve.elements if nerve.leq(a, b)]
    leq = lambda x, y: nerve.leq(x[0], y[0]) and nerve.leq(x[1], y[1])
    return PosetNerve(els, leq, cap=nerve.cap if cap is None else cap,
                      name=f"P1({nerve.name})")


class ProductSet(SimplicialSet):
    def __init__(self, X, Y, cap=None):
        self.X, self.Y = X, Y
        self.cap = min(X.cap, Y.cap) if cap is None else cap
        if self.cap > min(X.cap, Y.cap):
            raise CapError("product cap exceeds a factor's cap")

    def __repr__(self):
        return f"{self.X!r}x{self.Y!r}"

    def dim(self, x):
        return self.X.dim(x[0])

    def act(self, x, alpha):
        return (self.X.act(x[0], alpha), self.Y.act(x[1], alpha))

    def simplices(self, n):
        self._check_cap(n)
        return [(a, b) for a in self.X.simplices(n) for b in self.Y.simplices(n)]

    def is_degenerate(self, x):
        n = self.dim(x)
        for j in range(n):
            e = compose(delta(n, j), sigma(n - 1, j))
            if self.X.act(x[0], e) == x[0] and self.Y.act(x[1], e) == x[1]:
                return True
        return False


def product(X, Y, cap=None):
    return ProductSet(X, Y, cap)


class TableSet(SimplicialSet):
    """A simplicial set given by its nondegenerate cells and face tables.

    A simplex is (surjection, core id); faces[c] lists, for i = 0..dim c,
    the EZ pair (surjection, core) of d_i c.
    """

    def __init__(self, cells, faces, cap):
        self.cells = {int(k): list(v) for k, v in cells.items()}
        self.cell_dim = {c: k for k, cs in self.cells.items() for c in cs}
        self.faces = {c: [(tuple(s), t) for s, t in fs] for c, fs in faces.items()}
        self.cap = cap
        for c, k in self.cell_dim.items():
            if k and len(self.faces.get(c, ())) != k + 1:
                raise ValueError(f"cell {c} needs {k + 1} faces")
            for s, t in self.faces.get(c, ()):
                if t not in self.cell_dim or not is_surjection(s, self.cell_dim[t]) \
                        or len(s) != k:
                    raise ValueError(f"bad face entry ({s}, {t}) on cell {c}")

    def __repr__(self):
        return f"TableSet({sum(len(v) for v in self.cells.values())} cells)"

    def dim(self, x):
        return len(x[0]) - 1

    def act(self, x, alpha):
        s, c = x
        k = self.cell_dim[c]
        theta = compose(s, alpha)
        if is_surjection(theta, k):
            return theta, c
        missing = max(set(range(k + 1)) - set(theta))
        rest = tuple(t if t < missing else t - 1 for t in theta)
        return self.act(self.faces[c][missing], rest)

    def simplices(self, n):
        self._check_cap(n)
        out = []
        for k in range(n + 1):
            surjs = [s for s in ordinal_maps(n, k) if is_surjection(s, k)]
            for c in self.cells.get(k, ()):
                out.extend((s, c) for s in surjs)
        return out

    def is_degenerate(self, x):
        return len(x[0]) - 1 != self.cell_dim[x[1]]

    def ez(self, x):
        s, c = x
        return s, (tuple(range(self.cell_dim[c] + 1)), c)

    def to_json(self):
        cells = {}
        for k, cs in sorted(self.cells.items()):
            if k == 0:
                cells["0"] = list(cs)
            else:
                cells[str(k)] = [{"id": c, "faces": [[list(s), t] for s, t in self.faces[c]]}
                                 for c in cs]
        return {"cap": self.cap, "cells": cells}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        cells, faces = {}, {}
        for k, cs in obj["cells"].items():
            k = int(k)
            if k == 0:
                cells[0] = list(cs)
            else:
                cells[k] = [c["id"] for c in cs]
                for c in cs:
                    faces[c["id"]] = [(tuple(s), t) for s, t in c["faces"]]
        return cls(cells, faces, obj["cap"])


def materialize(X, cap=None):
    """Tabulate any simplicial set up to a cap as a TableSet."""
    cap = X.cap if cap is None else cap
    ids = {}
    cells = {}
    for n in range(cap + 1):
        cells[n] = []
        for x in X.nondegenerate(n):
            ids[x] = len(ids)
            cells[n].append(ids[x])
    faces = {}
    for n in range(1, cap + 1):
        for x in X.nondegenerate(n):
            fs = []
            for i in range(n + 1):
                s, core = X.ez(X.face(x, i))
                fs.append((s, ids[core]))
            faces[ids[x]] = fs
    return TableSet(cells, faces, cap), ids


def ez_apply(X, x, ops):
    """Apply a word of operators ("d", i) / ("s", j), rightmost first as in
    s_1 s_0 x, then return the EZ normal form."""
    for kind, i in reversed(ops):
        x = X.face(x, i) if kind == "d" else X.degeneracy(x, i)
    return X.ez(x)


# mapping spaces out of poset nerves

class MapSpace(SimplicialSet):
    """n-simplices are simplicial maps N(P_n) -> X for a cosimplicial poset
    P_., stored by their values on the maximal chains of P_n."""

    def __init__(self, X, poset, poset_map, cap, name="Map"):
        self.X = X
        self.poset = poset           # n -> PosetNerve
        self.poset_map = poset_map   # (alpha, m, n) -> element map P_m -> P_n
        self.cap = cap
        self.name = name
        self._cache = {}
        need = max(len(c) - 1 for c in poset(cap).maximal_chains())
        if need > X.cap:
            raise CapError(f"{name} at cap {cap} needs {X!r} up to dimension {need}")

    def __repr__(self):
        return f"{self.name}({self.X!r})"

    def dim(self, f):
        return f[0]

    def value(self, f, seq):
        """Image of a monotone sequence of P_n under the map f."""
        P = self.poset(f[0])
        C, pos = P.containing_chain(seq)
        idx = P.maximal_chains().index(C)
        return self.X.act(f[1][idx], pos)

    def act(self, f, alpha):
        n = f[0]
        m = len(alpha) - 1
        phi = self.poset_map(alpha, m, n)
        Pm = self.poset(m)
        vals = tuple(self.value(f, tuple(phi(e) for e in C)) for C in Pm.maximal_chains())
        return (m, vals)

    def simplices(self, n):
        self._check_cap(n)
        if n in self._cache:
            return self._cache[n]
        P = self.poset(n)
        chains = P.maximal_chains()
        inter = {}
        for a, b in itertools.combinations(range(len(chains)), 2):
            common = [e for e in chains[a] if e in chains[b]]
            if common:
                pa = tuple(chains[a].index(e) for e in common)
                pb = tuple(chains[b].index(e) for e in common)
                inter.setdefault(b, []).append((a, pa, pb))
        cands = [self.X.simplices(len(C) - 1) for C in chains]
        out = []

        def rec(k, acc):
            if k == len(chains):
                out.append((n, tuple(acc)))
                return
            for x in cands[k]:
                ok = True
                for a, pa, pb in inter.get(k, ()):
                    if self.X.act(acc[a], pa) != self.X.act(x, pb):
                        ok = False
                        break
                if ok:
                    acc.append(x)
                    rec(k + 1, acc)
                    acc.pop()
        rec(0, [])
        self._cache[n] = out
        return out


@lru_cache(maxsize=None)
def _cyl_poset(n):
    return product_poset(1, n, cap=n + 1)


@lru_cache(maxsize=None)
def _sd_poset(n):
    els = [frozenset(s) for k in range(1, n + 2)
           for s in itertools.combinations(range(n + 1), k)]
    return PosetNerve(els, lambda a, b: a <= b, cap=n, name=f"Sd{n}")


def path_space(X, cap):
    """[Delta^1, X]: p-simplices are maps Delta^1 x Delta^p -> X."""
    return MapSpace(X, _cyl_poset, lambda alpha, m, n: (lambda e: (e[0], alpha[e[1]])),
                    cap, name="Path")


def endpoint(PX, eps):
    """E_eps: [Delta^1, X] -> X, restriction to {eps} x Delta^p."""
    def E(f):
        n = f[0]
        return PX.value(f, tuple((eps, i) for i in range(n + 1)))
    return E


class SubSet(SimplicialSet):
    """Sub-simplicial set cut out by a predicate closed under the action."""

    def __init__(self, parent, pred, name="Sub"):
        self.parent = parent
        self.pred = pred
        self.cap = parent.cap
        self.name = name

    def __repr__(self):
        return f"{self.name}({self.parent!r})"

    def dim(self, x):
        return self.parent.dim(x)

    def act(self, x, alpha):
        return self.parent.act(x, alpha)

    def simplices(self, n):
        return [x for x in self.parent.simplices(n) if self.pred(x)]


def hom_space(X, x, y, cap):
    """X(x, y): paths starting at the constant x and ending at the constant y."""
    PX = path_space(X, cap)
    E0, E1 = endpoint(PX, 0), endpoint(PX, 1)

    def pred(f):
        n = f[0]
        c = (0,) * (n + 1)
        return E0(f) == X.act(x, c) and E1(f) == X.act(y, c)
    return SubSet(PX, pred, name=f"Hom[{x},{y}]")


def ex_step(X, cap):
    """Ex X: n-simplices are maps N(Sd [n]) -> X."""
    return MapSpace(X, _sd_poset,
                    lambda alpha, m, n: (lambda S: frozenset(alpha[i] for i in S)),
                    cap, name="Ex")


def ex_iterate(X, k, cap):
    for _ in range(k):
        X = ex_step(X, cap)
    return X


def ex_inclusion(X, EX):
    """X -> Ex X via the last-vertex map Sd[n] -> [n]."""
    def inc(x):
        n = X.dim(x)
        P = EX.poset(n)
        vals = tuple(X.act(x, tuple(max(S) for S in C)) for C in P.maximal_chains())
        return (n, vals)
    return inc


# forms on simplicial sets

class FormMap:
    """A g-valued form on a simplicial set: a GForm on Delta^n for every
    nondegenerate n-simplex, compatible with faces."""

    def __init__(self, domain, assignment, W=4, degs=(), max_dim=None):
        self.domain = domain
        self.assignment = dict(assignment)
        self.W = W
        self.degs = tuple(degs)
        self.max_dim = domain.cap if max_dim is None else max_dim

    def evaluate(self, x):
        surj, core = self.domain.ez(x)
        n = self.domain.dim(core)
        g = self.assignment.get(core)
        if g is None:
            g = GForm.zero(n, self.W, self.degs)
        return g.pullback(surj)

    def validate(self):
        """Face compatibility on nondegenerate simplices up to max_dim.
        Returns a list of (simplex, face index, difference)."""
        bad = []
        D = self.domain
        for n in range(1, self.max_dim + 1):
            for x in D.nondegenerate(n):
                g = self.evaluate(x)
                for i in range(n + 1):
                    lhs = self.evaluate(D.face(x, i))
                    rhs = g.pullback(delta(n, i))
                    if lhs != rhs:
                        bad.append((x, i, lhs - rhs))
        return bad

    def degrees(self):
        out = set()
        for g in self.assignment.values():
            out |= g.total_degrees()
        return out

    def is_connection(self):
        return self.degrees() <= {1}


def validate_form_map(omega):
    bad = omega.validate()
    return {"ok": not bad,
            "mismatches": [{"simplex": repr(x), "face": i, "difference": repr(d)}
                           for x, i, d in bad]}


class PosetForm:
    """A form on a poset nerve, given on its maximal chains."""

    def __init__(self, nerve, forms):
        self.nerve = nerve
        self.forms = dict(forms)
        some = next(iter(self.forms.values()))
        self.W, self.degs = some.W, some.degs

    def evaluate(self, seq):
        C, pos = self.nerve.containing_chain(tuple(seq))
        return self.forms[C].pullback(pos)

    def validate(self):
        bad = []
        chains = self.nerve.maximal_chains()
        for a, b in itertools.combinations(chains, 2):
            common = tuple(e for e in a if e in b)
            if not common:
                continue
            fa = self.forms[a].pullback(tuple(a.index(e) for e in common))
            fb = self.forms[b].pullback(tuple(b.index(e) for e in common))
            if fa != fb:
                bad.append((a, b, fa - fb))
        return bad

    def d(self):
        return PosetForm(self.nerve, {C: f.d() for C, f in self.forms.items()})

    def wedge(self, other):
        return PosetForm(self.nerve, {C: f.wedge(other.forms[C]) for C, f in self.forms.items()})

    def __add__(self, other):
        return PosetForm(self.nerve, {C: f + other.forms[C] for C, f in self.forms.items()})

    def __sub__(self, other):
        return PosetForm(self.nerve, {C: f - other.forms[C] for C, f in self.forms.items()})

    def __eq__(self, other):
        return isinstance(other, PosetForm) and self.forms == other.forms

    def pullback_along(self, target, phi):
        """Pullback along a poset map phi: target.elements -> self.nerve."""
        return PosetForm(target, {C: self.evaluate(tuple(phi(e) for e in C))
                                  for C in target.maximal_chains()})

    def to_form_map(self):
        assignment = {}
        for n in range(self.nerve.cap + 1):
            for x in self.nerve.nondegenerate(n):
                assignment[x] = self.evaluate(x)
        return FormMap(self.nerve, assignment, self.W, self.degs)


def global_form(nerve, omega):
    """The form on N([n]) given by one GForm on Delta^n."""
    return PosetForm(nerve, {C: omega.pullback(tuple(C)) for C in nerve.maximal_chains()})


# product coordinates

def product_action(form, alpha, n, r):
    """alpha: [m] -> [n] acting on a form in the coordinates b_1..b_n,
    f_1..f_r (slots 1..n and n+1..n+r)."""
    m = len(alpha) - 1
    img = [0] + [pullback_index(alpha, i) for i in range(1, n + 1)] + \
        [m + j for j in range(1, r + 1)]
    return form.remap(img, m + r)


def incl_form(chain, form):
    return form.remap(incl_slots(chain), chain.n + chain.r)


def re_form(chain, form):
    an = chain.analysis
    img = [0] + [an.bs[j] for j in range(1, chain.n + 1)] + \
        [an.fs[j] for j in range(1, chain.r + 1)]
    return form.remap(img, chain.p)


def family_from_product(form, n, r):
    """The compatible family (re_Gamma(form))_Gamma of a product-coordinate form."""
    return {c: re_form(c, form) for c in enumerate_maximal(n, r)}


def family_pullback(family, alpha, n, r):
    """alpha^* of a compatible family over [n] x [r] along alpha: [m] -> [n]:
    (alpha^* w)_P = (P^* alpha)^* w_{alpha_* P}."""
    m = len(alpha) - 1
    out = {}
    for P in enumerate_maximal(m, r):
        c1, beta = pushforward_pair(P, alpha, n)
        out[P] = family[c1].pullback(beta)
    return out


def family_degenerate(family, n, r):
    for h in range(n):
        e = compose(delta(n, h), sigma(n - 1, h))
        if family_pullback(family, e, n, r) == family:
            return True
    return False


def check_inclusion_naturality(n, r, mmax=3, powers=(1, 2)):
    """alpha^* incl_{alpha_*P}(x_i^[N]) = incl_P (P^*alpha)^*(x_i^[N])."""
    bad = []
    for m in range(mmax + 1):
        for alpha in ordinal_maps(m, n):
            for P in enumerate_maximal(m, r):
                c1, beta = pushforward_pair(P, alpha, n)
                for i in range(1, n + r + 1):
                    for N in powers:
                        x = GForm.from_poly(DPPoly.var(n + r, i, N))
                        lhs = product_action(incl_form(c1, x), alpha, n, r)
                        rhs = incl_form(P, x.pullback(beta))
                        if lhs != rhs:
                            bad.append((P, alpha, i, N))
                        dx = GForm.dx(n + r, i)
                        if product_action(incl_form(c1, dx), alpha, n, r) != \
                                incl_form(P, dx.pullback(beta)):
                            bad.append((P, alpha, i, "dx"))
    return bad


def check_retraction(n, r, forms):
    """re_Gamma o incl_Gamma = id on the given forms over Delta^{n+r}."""
    return [(c, f) for c in enumerate_maximal(n, r) for f in forms
            if re_form(c, incl_form(c, f)) != f]


def check_face_nondegeneracy(n, r, forms):
    """For product-coordinate forms: a nondegenerate family has
    nondegenerate faces, and family_pullback agrees with the product-level
    action.  Returns counterexamples."""
    bad = []
    for Om in forms:
        fam = family_from_product(Om, n, r)
        for i in range(n + 1):
            d = delta(n, i)
            face = family_pullback(fam, d, n, r)
            if face != family_from_product(product_action(Om, d, n, r), n - 1, r):
                bad.append((Om, i, "action"))
        if n < 2 or family_degenerate(fam, n, r):
            continue
        for i in range(n + 1):
            face = family_pullback(fam, delta(n, i), n, r)
            if family_degenerate(face, n - 1, r):
                bad.append((Om, i, "degenerate face"))
    return bad
