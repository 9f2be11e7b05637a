"""A-infinity categories as square-zero coderivations on tensor cocategories.

Elements of T A[1] are dicts {word: coeff}; a word is a tuple of basis
arrows f_1, ..., f_k with tgt(f_i) == src(f_{i+1}).  A category supplies
`src`, `tgt`, `deg` (unshifted degree) for its basis arrows and the Taylor
components b_k(word) -> {arrow: coeff}.  The coderivation is

    D(f_1 .. f_n) = sum (-1)^{s_1 + .. + s_p} f_1 .. f_p b_r(f_{p+1} .. f_{p+r}) f_{p+r+1} .. f_n

with s_i = |f_i| + 1 the shifted degree.
"""

from __future__ import annotations

import itertools
import json
import random
from math import comb

from .derham import compose, ordinal_maps


def _acc(out, key, c):
    if not c:
        return
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class AInftyCategory:
    def __init__(self, objects, src, tgt, deg, taylor, basis=None, units=None,
                 max_arity=None, name="A"):
        self.objects = list(objects)
        self._src, self._tgt, self._deg = src, tgt, deg
        self._taylor = taylor
        self._basis = basis
        self.units = dict(units or {})
        self.max_arity = max_arity
        self.name = name

    def __repr__(self):
        return f"AInftyCategory({self.name}, {len(self.objects)} objects)"

    def src(self, f):
        return self._src(f)

    def tgt(self, f):
        return self._tgt(f)

    def deg(self, f):
        return self._deg(f)

    def sdeg(self, f):
        return self._deg(f) + 1

    def b(self, word):
        if self.max_arity is not None and len(word) > self.max_arity:
            return {}
        return self._taylor(tuple(word))

    def basis(self):
        if self._basis is None:
            raise ValueError(f"{self.name} has no finite basis")
        return list(self._basis() if callable(self._basis) else self._basis)

    def composable(self, word):
        return all(self.tgt(a) == self.src(b) for a, b in zip(word, word[1:]))

    def D(self, elem):
        out = {}
        for word, c in elem.items():
            n = len(word)
            pre = 0
            for p in range(n):
                sign = -c if pre & 1 else c
                for r in range(1, n - p + 1):
                    for g, k in self.b(word[p:p + r]).items():
                        _acc(out, word[:p] + (g,) + word[p + r:], sign * k)
                pre += self.sdeg(word[p])
        return out

    def words(self, max_len, basis=None):
        """Composable words of length 1..max_len over the given basis."""
        basis = self.basis() if basis is None else list(basis)
        by_src = {}
        for f in basis:
            by_src.setdefault(self.src(f), []).append(f)
        out = []
        frontier = [(f,) for f in basis]
        for _ in range(max_len):
            out.extend(frontier)
            frontier = [w + (g,) for w in frontier for g in by_src.get(self.tgt(w[-1]), ())]
        return out

    def check_square_zero(self, max_len=4, words=None):
        """Words w with D(D(w)) != 0; returns (failures, number checked)."""
        words = self.words(max_len) if words is None else words
        bad = [w for w in words if self.D(self.D({w: 1}))]
        return bad, len(words)

    def check_units(self, max_len=3, words=None):
        """Strict unit axioms: b_2(f, id) = (-1)^{|f|+1} f, b_2(id, f) = -f,
        b_1(id) = 0 and every other b_k with a unit vanishes."""
        bad = []
        unit_set = set(self.units.values())
        words = self.words(max_len) if words is None else words
        for w in words:
            if not unit_set & set(w):
                continue
            got = self.b(w)
            want = {}
            if len(w) == 2:
                f, g = w
                if g in unit_set and f not in unit_set:
                    want = {f: -1 if self.deg(f) % 2 == 0 else 1}
                elif f in unit_set and g not in unit_set:
                    want = {g: -1}
                elif f in unit_set and g in unit_set:
                    want = {f: -1}
            if got != want:
                bad.append((w, got, want))
        return bad


def table_category(objects, arrows, b, units=None, name="table"):
    """arrows: {name: (src, tgt, deg)}; b: {word tuple: {name: coeff}}."""
    arrows = dict(arrows)
    return AInftyCategory(objects, lambda f: arrows[f][0], lambda f: arrows[f][1],
                          lambda f: arrows[f][2], lambda w: b.get(w, {}),
                          basis=list(arrows), units=units, name=name)


def to_json(A, max_len=3):
    arrows = {str(f): [A.src(f), A.tgt(f), A.deg(f)] for f in A.basis()}
    rows = []
    for w in A.words(max_len):
        out = A.b(w)
        if out:
            rows.append({"in": [str(f) for f in w],
                         "out": [{"c": c, "a": str(g)} for g, c in sorted(out.items(), key=str)]})
    return {"v": 1, "objects": A.objects, "arrows": arrows, "b": rows,
            "units": {str(k): str(v) for k, v in A.units.items()}}


def from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    arrows = {f: tuple(v) for f, v in obj["arrows"].items()}
    b = {}
    for row in obj.get("b", []):
        b[tuple(row["in"])] = {o["a"]: o["c"] for o in row["out"]}
    objs = obj["objects"]
    units = {}
    for k, v in obj.get("units", {}).items():
        key = next((o for o in objs if str(o) == k), k)
        units[key] = v
    return table_category(objs, arrows, b, units, name=obj.get("name", "json"))


# dg algebras

def from_dg_algebra(basis, degs, d, mul, unit=None, name="dga"):
    """One-object A-infinity algebra of a dg algebra: b_1 = d,
    b_2(x, y) = (-1)^{|x|+1} x y, b_k = 0 for k >= 3.

    d(x) and mul(x, y) return {basis element: coeff}; degs maps basis
    elements to degrees (d has degree -1).
    """
    degs = dict(degs) if not callable(degs) else degs
    deg = degs if callable(degs) else (lambda x: degs[x])

    def taylor(w):
        if len(w) == 1:
            return d(w[0])
        if len(w) == 2:
            x, y = w
            s = 1 if deg(x) % 2 else -1
            return {k: s * c for k, c in mul(x, y).items()}
        return {}
    units = {"*": unit} if unit is not None else {}
    return AInftyCategory(["*"], lambda x: "*", lambda x: "*", deg, taylor,
                          basis=basis, units=units, max_arity=2, name=name)


def check_dg_algebra(basis, degs, d, mul):
    """Named axiom violations of a dg algebra on the given basis."""
    deg = degs if callable(degs) else (lambda x: degs[x])

    def lin(f, elem):
        out = {}
        for x, c in elem.items():
            for y, k in f(x).items():
                _acc(out, y, c * k)
        return out

    def mul2(a, b):
        out = {}
        for x, c in a.items():
            for y, k in b.items():
                for z, m in mul(x, y).items():
                    _acc(out, z, c * k * m)
        return out
    errors = []
    for x in basis:
        if lin(d, d(x)):
            errors.append(("d^2", (x,)))
    for x, y in itertools.product(basis, repeat=2):
        lhs = lin(d, mul(x, y))
        rhs = mul2(d(x), {y: 1})
        for z, c in mul2({x: 1}, d(y)).items():
            _acc(rhs, z, -c if deg(x) % 2 else c)
        if lhs != rhs:
            errors.append(("Leibniz", (x, y)))
    for x, y, z in itertools.product(basis, repeat=3):
        if mul2(mul(x, y), {z: 1}) != mul2({x: 1}, mul(y, z)):
            errors.append(("associativity", (x, y, z)))
    return errors


def exterior_algebra(gens=("e1", "e2"), degree=1):
    """Lambda(gens) with generators of the given (odd) degree, zero differential."""
    subsets = [s for k in range(len(gens) + 1) for s in itertools.combinations(range(len(gens)), k)]
    degs = {s: degree * len(s) for s in subsets}

    def mul(a, b):
        if set(a) & set(b):
            return {}
        seq = list(a + b)
        inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
        return {tuple(sorted(seq)): -1 if inv % 2 and degree % 2 else 1}
    return subsets, degs, (lambda x: {}), mul


def gtheta_algebra(alg, W=3, K=3, max_weight=2):
    """U(g) (x) Z<theta> truncated at word length W and theta power K:
    basis (word, k), degree = word degree, d = delta on U, product =
    concatenation times theta^[a] theta^[b] = C(a+b, a) theta^[a+b]."""
    letters = alg.letters(max_weight)
    words = [w for L in range(W + 1) for w in itertools.product(letters, repeat=L)]
    basis = [(w, k) for w in words for k in range(K + 1)]

    def deg(x):
        return alg.word_degree(x[0])

    def d(x):
        w, k = x
        return {(w2, k): c for w2, c in alg.delta_word(w, W).items()}

    def mul(x, y):
        (w1, a), (w2, b) = x, y
        if len(w1) + len(w2) > W or a + b > K:
            return {}
        return {(w1 + w2, a + b): comb(a + b, a)}
    return basis, deg, d, mul


def gtheta_category(alg, W=3, K=3, max_weight=2):
    basis, deg, d, mul = gtheta_algebra(alg, W, K, max_weight)
    return from_dg_algebra(basis, deg, d, mul, unit=((), 0), name=f"G(W={W},K={K})")


def gtheta_element(form0, K):
    """A GForm on Delta^0 (word (x) c theta^[k] terms) as a B-element."""
    out = {}
    for (w, S, m), c in form0.terms.items():
        if S or m[0] > K:
            continue
        _acc(out, (w, m[0]), c)
    return out


# the cosimplicial A-infinity category

def simplex_category(n):
    """A_infty^n: arrows (i, j), i <= j, degree 0, b_2((i,j),(j,k)) = -(i,k)."""
    arrows = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]

    def taylor(w):
        if len(w) == 2:
            return {(w[0][0], w[1][1]): -1}
        return {}
    return AInftyCategory(list(range(n + 1)), lambda f: f[0], lambda f: f[1], lambda f: 0,
                          taylor, basis=arrows, units={i: (i, i) for i in range(n + 1)},
                          max_arity=2, name=f"Ainf^{n}")


class StrictFunctor:
    """A strict A-infinity functor given by its object map and its linear
    component F_1: arrow -> {arrow: coeff}; F(f_1 .. f_k) = F_1 f_1 .. F_1 f_k."""

    def __init__(self, source, target, obj_map, F1, name="F"):
        self.source, self.target = source, target
        self.obj_map = obj_map
        self._F1 = F1
        self.name = name

    def F1(self, f):
        return self._F1(f)

    def apply(self, elem):
        out = {}
        for word, c in elem.items():
            parts = [list(self.F1(f).items()) for f in word]
            for combo in itertools.product(*parts):
                k = c
                for _, m in combo:
                    k *= m
                _acc(out, tuple(g for g, _ in combo), k)
        return out

    def check(self, words):
        """Words w with F(D w) != D(F w)."""
        bad = []
        for w in words:
            lhs = self.apply(self.source.D({w: 1}))
            rhs = self.target.D(self.apply({w: 1}))
            if lhs != rhs:
                bad.append((w, lhs, rhs))
        return bad

    def check_units(self):
        bad = []
        for x, u in self.source.units.items():
            want = {self.target.units.get(self.obj_map(x)): 1}
            if self.F1(u) != want:
                bad.append((x, self.F1(u), want))
        return bad


def cosimplicial_map(alpha, m, n):
    alpha = tuple(alpha)
    return StrictFunctor(simplex_category(m), simplex_category(n), lambda i: alpha[i],
                         lambda f: {(alpha[f[0]], alpha[f[1]]): 1}, name=f"{alpha}_*")


def check_cosimplicial(max_n=3, max_len=3):
    """Failures of functoriality and of F.D = D.F for all alpha_*."""
    bad = []
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            for a in ordinal_maps(m, n):
                F = cosimplicial_map(a, m, n)
                if F.check(F.source.words(max_len)) or F.check_units():
                    bad.append(("functor", a))
                for k in range(max_n + 1):
                    for b in ordinal_maps(n, k):
                        G = cosimplicial_map(b, n, k)
                        GF = cosimplicial_map(compose(b, a), m, k)
                        for f in F.source.basis():
                            if G.apply(F.apply({(f,): 1})) != GF.apply({(f,): 1}):
                                bad.append(("composition", a, b, f))
    return bad


def nerve_validate(candidate, B, n, max_len=3):
    """Is the candidate a unit-preserving strict functor A_infty^n -> B?

    candidate: {"objects": [B-object for i in 0..n], "arrows": {(i, j): B-element}}.
    Returns {"ok": bool, "violation": first failing constraint or None}.
    """
    objs = candidate["objects"]
    arrows = candidate["arrows"]
    A = simplex_category(n)
    for f in A.basis():
        if f not in arrows:
            return {"ok": False, "violation": {"kind": "missing", "arrow": f}}
        for g in arrows[f]:
            if B.src(g) != objs[f[0]] or B.tgt(g) != objs[f[1]]:
                return {"ok": False, "violation": {"kind": "endpoints", "arrow": f}}
            if B.deg(g) != 0:
                return {"ok": False, "violation": {"kind": "degree", "arrow": f}}
    F = StrictFunctor(A, B, lambda i: objs[i], lambda f: arrows[f])
    for x, *_ in F.check_units():
        return {"ok": False, "violation": {"kind": "unit", "object": x}}
    for w in A.words(max_len):
        lhs = F.apply(A.D({w: 1}))
        rhs = B.D(F.apply({w: 1}))
        if lhs != rhs:
            diff = dict(lhs)
            for k, c in rhs.items():
                _acc(diff, k, -c)
            return {"ok": False, "violation": {"kind": "FD=DF", "word": w,
                                               "difference": {repr(k): c for k, c in diff.items()}}}
    return {"ok": True, "violation": None}


# strict unitalization

def unitalize(A):
    """A-bar: adjoin a new strict unit ("id", x) at every object."""
    ids = {x: ("id", x) for x in A.objects}
    is_id = lambda f: isinstance(f, tuple) and len(f) == 2 and f[0] == "id" and f in ids.values()

    def src(f):
        return f[1] if is_id(f) else A.src(f)

    def tgt(f):
        return f[1] if is_id(f) else A.tgt(f)

    def deg(f):
        return 0 if is_id(f) else A.deg(f)

    def taylor(w):
        nid = sum(1 for f in w if is_id(f))
        if not nid:
            return A.b(w)
        if len(w) == 2:
            f, g = w
            if is_id(g) and not is_id(f):
                return {f: 1 if A.deg(f) % 2 else -1}
            if is_id(f) and not is_id(g):
                return {g: -1}
            if is_id(f) and is_id(g):
                return {f: -1}
        return {}

    basis = None
    if A._basis is not None:
        basis = A.basis() + list(ids.values())
    return AInftyCategory(A.objects, src, tgt, deg, taylor, basis=basis, units=ids,
                          name=f"{A.name}-bar")


def extend_to_unitalization(F, Abar):
    """The unit-preserving extension A-bar -> B of a strict functor F: A -> B."""
    B = F.target

    def F1(f):
        if isinstance(f, tuple) and len(f) == 2 and f[0] == "id" and f in Abar.units.values():
            return {B.units[F.obj_map(f[1])]: 1}
        return F.F1(f)
    return StrictFunctor(Abar, B, F.obj_map, F1, name=F.name + "-bar")


# dg quivers and the free A-infinity category

class DGQuiver:
    """Finite dg quiver: arrows {name: (src, tgt, deg)}, differential {name: {name: c}}."""

    def __init__(self, objects, arrows, diff=None):
        self.objects = list(objects)
        self.arrows = dict(arrows)
        self.diff = {k: dict(v) for k, v in (diff or {}).items()}

    def d(self, a):
        return self.diff.get(a, {})

    def check(self):
        bad = []
        for a in self.arrows:
            dd = {}
            for b, c in self.d(a).items():
                for e, k in self.d(b).items():
                    _acc(dd, e, c * k)
                if self.arrows[b][:2] != self.arrows[a][:2] or self.arrows[b][2] != self.arrows[a][2] - 1:
                    bad.append(("shape", a, b))
            if dd:
                bad.append(("d^2", a))
        return bad


def free_on_quiver(Q, max_leaves=4):
    """Bounded tree model of the free A-infinity category on Q.

    Arrows are planar trees: ("leaf", a) or ("node", (t_1, .., t_k)) with
    k >= 2; b_k for k >= 2 grafts a new root, and b_1 is the internal
    differential on leaves extended so that the A-infinity relation holds.
    """
    def leaves(t):
        return 1 if t[0] == "leaf" else sum(leaves(c) for c in t[1])

    def src(t):
        return Q.arrows[t[1]][0] if t[0] == "leaf" else src(t[1][0])

    def tgt(t):
        return Q.arrows[t[1]][1] if t[0] == "leaf" else tgt(t[1][-1])

    def deg(t):
        if t[0] == "leaf":
            return Q.arrows[t[1]][2]
        return sum(deg(c) + 1 for c in t[1]) - 2

    cache = {}

    def taylor(w):
        if len(w) >= 2:
            if sum(leaves(t) for t in w) > max_leaves:
                return {}
            return {("node", tuple(w)): 1}
        t = w[0]
        if t in cache:
            return cache[t]
        if t[0] == "leaf":
            out = {("leaf", b): c for b, c in Q.d(t[1]).items()}
        else:
            kids = t[1]
            k = len(kids)
            out = {}
            pre = 0
            for p in range(k):
                sign = -1 if pre & 1 else 1
                for r in range(1, k - p + 1):
                    if r == k:
                        continue
                    inner = taylor(kids[p:p + r])
                    for g, c in inner.items():
                        new = kids[:p] + (g,) + kids[p + r:]
                        for h, e in taylor(new).items():
                            _acc(out, h, -sign * c * e)
                pre += deg(kids[p]) + 1
        cache[t] = out
        return out

    def basis():
        by_len = {}
        base = [("leaf", a) for a in Q.arrows]
        trees = {1: base}
        for L in range(2, max_leaves + 1):
            trees[L] = []
            for k in range(2, L + 1):
                for sizes in _compositions(L, k):
                    for kids in itertools.product(*(trees[s] for s in sizes)):
                        if all(tgt(a) == src(b) for a, b in zip(kids, kids[1:])):
                            trees[L].append(("node", tuple(kids)))
        return [t for L in range(1, max_leaves + 1) for t in trees[L]]

    A = AInftyCategory(Q.objects, src, tgt, deg, taylor, basis=basis, name="FQ")
    A.leaves = leaves
    A.max_leaves = max_leaves
    return A


def exact_words(FQ, max_len):
    """Composable words of the tree model whose total leaf count is within
    the cap, i.e. where the bounded model computes D exactly."""
    return [w for w in FQ.words(max_len) if sum(FQ.leaves(t) for t in w) <= FQ.max_leaves]


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def free_builder(FQ, B, obj_map, phi):
    """The strict functor FQ -> B induced by a dg-quiver morphism phi: Q -> B
    (phi: Q-arrow name -> B-element)."""
    cache = {}

    def F1(t):
        if t in cache:
            return cache[t]
        if t[0] == "leaf":
            out = dict(phi(t[1]))
        else:
            parts = [list(F1(c).items()) for c in t[1]]
            out = {}
            for combo in itertools.product(*parts):
                k = 1
                for _, m in combo:
                    k *= m
                for g, c in B.b(tuple(x for x, _ in combo)).items():
                    _acc(out, g, k * c)
        cache[t] = out
        return out
    return StrictFunctor(FQ, B, obj_map, F1, name="free-builder")


def check_quiver_morphism(Q, B, phi):
    """phi(d a) == b_1(phi(a)) for every Q-arrow."""
    bad = []
    for a in Q.arrows:
        lhs = {}
        for b, c in Q.d(a).items():
            for g, k in phi(b).items():
                _acc(lhs, g, c * k)
        rhs = {}
        for g, c in phi(a).items():
            for h, k in B.b((g,)).items():
                _acc(rhs, h, c * k)
        if lhs != rhs:
            bad.append(a)
    return bad


# path quivers

def path_quiver(X, k=0, max_dim=0):
    """Q(Ex^k X, Z) on normalized chains of the hom spaces, up to max_dim.
    Arrows are (x, y, simplex) with degree = dimension of the simplex."""
    from .simplicial import ex_inclusion, ex_iterate, hom_space
    Y = ex_iterate(X, k, X.cap) if k else X
    verts = Y.simplices(0)
    arrows, diff = {}, {}
    for x in verts:
        for y in verts:
            H = hom_space(Y, x, y, max(max_dim, 0))
            for q in range(max_dim + 1):
                for s in H.parent.nondegenerate(q):
                    if not H.pred(s):
                        continue
                    name = (x, y, s)
                    arrows[name] = (x, y, q)
                    if q:
                        dd = {}
                        for i in range(q + 1):
                            f = H.parent.face(s, i)
                            if not H.parent.is_degenerate(f):
                                _acc(dd, (x, y, f), -1 if i & 1 else 1)
                        diff[name] = dd
    return DGQuiver(verts, arrows, diff), Y


def pi_map(n):
    """The canonical dg-quiver morphism Q(Delta^n) -> A_infty^n."""
    from .simplicial import simplex
    Q, _ = path_quiver(simplex(n, cap=n + 1), 0, 0)
    return Q, (lambda a: {(a[0][0], a[1][0]): 1})


def ahol(n, nabla, alg, W=3, K=None, max_leaves=3):
    """Holonomy functor data on X = Delta^n (k = 0): the dg-quiver morphism
    Q(X) -> B from holonomy at the 0-simplices of the hom spaces, extended
    along the free model.  K defaults to the largest theta power that occurs,
    so the only truncation is by word length W.  Returns (FQ, B, functor,
    phi table)."""
    from .holonomy import hol
    from .simplicial import path_space
    X = nabla.domain
    PX = path_space(X, cap=0)
    Q, _ = path_quiver(X, 0, 0)
    raw = {a: hol(PX, a[2], nabla, W)((0,)) for a in Q.arrows}
    if K is None:
        K = max((m[0] for v in raw.values() for (_, _, m) in v.terms), default=0)
    B = gtheta_category(alg, W, K, max_weight=1)
    table = {a: gtheta_element(v, K) for a, v in raw.items()}
    FQ = free_on_quiver(Q, max_leaves)
    F = free_builder(FQ, B, lambda v: "*", lambda a: table[a])
    F.quiver = Q
    return FQ, B, F, table


def toy_nerve_family(alg, W=3, K=3):
    """A hand-built 2-simplex of the nerve in the G-theta toy: F(0,1) =
    1 + a theta, F(1,2) = 1 + b theta, F(0,2) = F(0,1) F(1,2), units on (i,i)."""
    a, b = (0,), (1,)
    one = ((), 0)
    f01 = {one: 1, ((a,), 1): 1}
    f12 = {one: 1, ((b,), 1): 1}
    f02 = {one: 1, ((a,), 1): 1, ((b,), 1): 1, ((a, b), 2): 2}
    return {"objects": ["*"] * 3,
            "arrows": {(0, 0): {one: 1}, (1, 1): {one: 1}, (2, 2): {one: 1},
                       (0, 1): f01, (1, 2): f12, (0, 2): f02}}
