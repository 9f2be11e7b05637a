"""L-infinity algebras on finite bases and their enveloping dg algebras.

Elements of Sym g[1] are dicts {monomial: coeff}; a monomial is a
nondecreasing tuple of basis indices.  The suspended degree of basis
element b is degs[b] + 1, and Koszul signs use suspended degrees.

The structure is given by the Taylor components D^(k): Sym^k g[1] -> g[1]
on canonical (sorted) inputs; D is their coderivation extension.

The enveloping algebra U is the tensor algebra on Ker(pr_0)[-1]: a word is
a tuple of letters, each letter a nonempty monomial.  Letter degree is
(sum of suspended degrees) - 1.
"""

from __future__ import annotations

import itertools
import json


def _acc(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class LInftyAlgebra:

    def __init__(self, names, degs, taylor=None, arity=None):
        if len(names) != len(degs):
            raise ValueError("names and degrees differ in length")
        if any(d < 0 for d in degs):
            raise ValueError("basis degrees must be non-negative")
        self.names = tuple(names)
        self.degs = tuple(degs)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.taylor = {}
        for k, table in (taylor or {}).items():
            clean = {}
            for key, out in table.items():
                s, can = self.sym_sort(key)
                if not s:
                    if any(out.values()):
                        raise ValueError(
                            f"l_{k} is nonzero on {key}, which vanishes in Sym")
                    continue
                val = {b: s * c for b, c in out.items() if c}
                if can in clean and clean[can] != val:
                    raise ValueError(
                        f"l_{k} is not graded-symmetric: {key} conflicts with "
                        f"{can}")
                clean[can] = val
                for b in val:
                    want = sum(self.sdeg(x) for x in can) - 1
                    if self.sdeg(b) != want:
                        raise ValueError(
                            f"l_{k}{key} -> {self.names[b]} has the wrong degree")
            self.taylor[int(k)] = clean
        self.arity = arity or max(self.taylor, default=0)

    @property
    def rank(self):
        return len(self.names)

    def sdeg(self, b):
        return self.degs[b] + 1

    def mono_sdeg(self, m):
        return sum(self.degs[b] + 1 for b in m)

    def letter_degree(self, m):
        return self.mono_sdeg(m) - 1

    def word_degree(self, w):
        return sum(self.letter_degree(l) for l in w)

    def is_abelian(self):
        return not any(any(t.values()) for t in self.taylor.values())

    # Sym g[1]

    def sym_sort(self, seq):
        """(sign, canonical monomial); sign 0 if an odd element repeats."""
        seq = list(seq)
        sign = 1
        # insertion sort with Koszul signs
        for i in range(1, len(seq)):
            j = i
            while j > 0 and seq[j - 1] > seq[j]:
                if self.sdeg(seq[j - 1]) & 1 and self.sdeg(seq[j]) & 1:
                    sign = -sign
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                j -= 1
        for a, b in zip(seq, seq[1:]):
            if a == b and self.sdeg(a) & 1:
                return 0, None
        return sign, tuple(seq)

    def epsilon(self, perm, xs):
        """Koszul sign with x_1 ^ ... ^ x_n = eps * x_perm(1) ^ ... ."""
        sign = 1
        items = list(perm)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if items[i] > items[j]:
                    if self.sdeg(xs[items[i]]) & 1 and self.sdeg(xs[items[j]]) & 1:
                        sign = -sign
        return sign

    def unshuffles(self, m, p):
        """(sign, left, right) over (p, n-p) unshuffles of monomial m."""
        n = len(m)
        for I in itertools.combinations(range(n), p):
            J = tuple(j for j in range(n) if j not in I)
            s = self.epsilon(I + J, m)
            yield s, tuple(m[i] for i in I), tuple(m[j] for j in J)

    def coproduct(self, m, reduced=False):
        """Delta(m) as {(left, right): coeff}; left/right canonical."""
        out = {}
        lo, hi = (1, len(m) - 1) if reduced else (0, len(m))
        for p in range(lo, hi + 1):
            for s, L, R in self.unshuffles(m, p):
                s1, L = self.sym_sort(L)
                s2, R = self.sym_sort(R)
                if s1 and s2:
                    _acc(out, (L, R), s * s1 * s2)
        return out

    def wedge(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                s, m = self.sym_sort(m1 + m2)
                if s:
                    _acc(out, m, s * c1 * c2)
        return out

    def D(self, m):
        """Coderivation extension of the Taylor components on a monomial."""
        out = {}
        n = len(m)
        for k, table in self.taylor.items():
            if k > n:
                continue
            for s, I, J in self.unshuffles(m, k):
                s1, can = self.sym_sort(I)
                if not s1 or can not in table:
                    continue
                for b, c in table[can].items():
                    s2, mm = self.sym_sort((b,) + J)
                    if s2:
                        _acc(out, mm, s * s1 * s2 * c)
        return out

    def D_lin(self, x):
        out = {}
        for m, c in x.items():
            for mm, k in self.D(m).items():
                _acc(out, mm, c * k)
        return out

    def monomials(self, weight):
        """All canonical nonzero monomials of the given weight."""
        out = []
        for combo in itertools.combinations_with_replacement(range(self.rank), weight):
            s, m = self.sym_sort(combo)
            if s:
                out.append(m)
        return out

    def check_D2(self, max_weight=4, max_degree=None):
        """Monomials on which D o D is nonzero (empty list = pass)."""
        bad = []
        for w in range(1, max_weight + 1):
            for m in self.monomials(w):
                if max_degree is not None and self.mono_sdeg(m) > max_degree:
                    continue
                if self.D_lin(self.D(m)):
                    bad.append(m)
        return bad

    # enveloping algebra

    def delta_letter(self, m):
        """delta(m[-1]) = D(m)[-1] - sum (-1)^{|x_i|} x_i[-1] (x) y_i[-1]."""
        out = {}
        for mm, c in self.D(m).items():
            _acc(out, (mm,), c)
        for (L, R), c in self.coproduct(m, reduced=True).items():
            s = -1 if self.mono_sdeg(L) & 1 else 1
            _acc(out, (L, R), -s * c)
        return out

    def delta_word(self, w, W=None):
        """Derivation extension of delta to words, dropping length > W."""
        out = {}
        pre = 0
        for i, l in enumerate(w):
            sign = -1 if pre & 1 else 1
            for w2, c in self.delta_letter(l).items():
                nw = w[:i] + w2 + w[i + 1:]
                if W is None or len(nw) <= W:
                    _acc(out, nw, sign * c)
            pre += self.letter_degree(l)
        return out

    def delta(self, x, W=None):
        out = {}
        for w, c in x.items():
            for w2, k in self.delta_word(w, W).items():
                _acc(out, w2, c * k)
        return out

    def letters(self, max_weight):
        out = []
        for k in range(1, max_weight + 1):
            out.extend(self.monomials(k))
        return out

    def words(self, max_len, max_weight=2):
        ls = self.letters(max_weight)
        for n in range(0, max_len + 1):
            yield from itertools.product(ls, repeat=n)

    def check_delta2(self, W, max_weight=2):
        """Words of length <= W-1 on which delta^2 is nonzero, computed
        modulo words longer than W."""
        bad = []
        for w in self.words(W - 1, max_weight):
            if self.delta(self.delta_word(w, W), W):
                bad.append(w)
        return bad

    # serialization

    def to_json(self):
        ls = {}
        for k, table in sorted(self.taylor.items()):
            rows = []
            for key, val in sorted(table.items()):
                rows.append({"in": [self.names[b] for b in key],
                             "out": [{"c": c, "b": self.names[b]}
                                     for b, c in sorted(val.items())]})
            ls[str(k)] = rows
        return {"basis": [{"name": n, "deg": d} for n, d in zip(self.names, self.degs)],
                "l": ls}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        names = [b["name"] for b in obj["basis"]]
        degs = [b["deg"] for b in obj["basis"]]
        idx = {n: i for i, n in enumerate(names)}
        taylor = {}
        for k, rows in obj.get("l", {}).items():
            t = {}
            for row in rows:
                key = tuple(idx[n] for n in row["in"])
                t[key] = {idx[o["b"]]: o["c"] for o in row["out"]}
            taylor[int(k)] = t
        return cls(names, degs, taylor)


def abelian(names, degs):
    return LInftyAlgebra(names, degs, {})


def from_dg_lie(names, degs, diff=None, bracket=None):
    """L-infinity algebra of a dg Lie algebra.

    diff: {a: {b: c}} for the differential; bracket: {(a, b): {c: k}} on
    basis names or indices.  Missing orders are filled by skew-symmetry.
    The three axioms are checked on the basis.
    """
    idx = {n: i for i, n in enumerate(names)}
    key = lambda x: idx[x] if isinstance(x, str) else x
    rank = len(names)
    d = {key(a): {key(b): c for b, c in v.items() if c} for a, v in (diff or {}).items()}
    br = {}
    for (a, b), v in (bracket or {}).items():
        br[(key(a), key(b))] = {key(c): k for c, k in v.items() if k}
    for (a, b), v in list(br.items()):
        s = -1 if (degs[a] * degs[b]) & 1 else 1
        mirrored = {c: -s * k for c, k in v.items()}
        if (b, a) in br and br[(b, a)] != mirrored:
            raise ValueError(f"skew-symmetry fails on ({names[a]}, {names[b]})")
        br[(b, a)] = mirrored

    def lin_d(x):
        out = {}
        for a, c in x.items():
            for b, k in d.get(a, {}).items():
                _acc(out, b, c * k)
        return out

    def lin_br(x, y):
        out = {}
        for a, c in x.items():
            for b, k in y.items():
                for e, v in br.get((a, b), {}).items():
                    _acc(out, e, c * k * v)
        return out

    for a in range(rank):
        if lin_d(lin_d({a: 1})):
            raise ValueError(f"differential does not square to zero on {names[a]}")
        for b in range(rank):
            for e in br.get((a, b), {}):
                if degs[e] != degs[a] + degs[b]:
                    raise ValueError(f"[{names[a]}, {names[b]}] has the wrong degree")
            lhs = lin_d(lin_br({a: 1}, {b: 1}))
            s = -1 if degs[a] & 1 else 1
            rhs = lin_br(lin_d({a: 1}), {b: 1})
            for e, v in lin_br({a: 1}, lin_d({b: 1})).items():
                _acc(rhs, e, s * v)
            if lhs != rhs:
                raise ValueError(
                    f"Leibniz rule fails on ({names[a]}, {names[b]})")
            for c in range(rank):
                lhs = lin_br({a: 1}, lin_br({b: 1}, {c: 1}))
                rhs = lin_br(lin_br({a: 1}, {b: 1}), {c: 1})
                s = -1 if (degs[a] * degs[b]) & 1 else 1
                for e, v in lin_br({b: 1}, lin_br({a: 1}, {c: 1})).items():
                    _acc(rhs, e, s * v)
                if lhs != rhs:
                    raise ValueError(
                        "Jacobi identity fails on "
                        f"({names[a]}, {names[b]}, {names[c]})")

    taylor = {1: {}, 2: {}}
    for a, v in d.items():
        if v:
            taylor[1][(a,)] = dict(v)
    for a in range(rank):
        for b in range(a, rank):
            v = br.get((a, b), {})
            if not v:
                continue
            # D^(2)(x_a ^ x_b) = (-1)^{|x_a|+1} [x_a, x_b][1]
            s = -1 if (degs[a] + 1) & 1 else 1
            taylor[2][(a, b)] = {e: s * k for e, k in v.items()}
    return LInftyAlgebra(names, degs, taylor)


def dg_lie_D_reference(alg, diff, bracket, m):
    """Direct evaluation of D = D_1 + D_2 from the defining sums (oracle).

    diff/bracket are index-keyed dicts as in from_dg_lie after filling.
    """
    degs = alg.degs
    out = {}
    r = len(m)
    nu = [0]
    for b in m:
        nu.append(nu[-1] + degs[b] + 1)
    for i in range(r):
        for e, c in diff.get(m[i], {}).items():
            s, mm = alg.sym_sort(m[:i] + (e,) + m[i + 1:])
            if s:
                _acc(out, mm, (-1) ** nu[i] * s * c)
    for i in range(r):
        for j in range(i + 1, r):
            xi, xj = m[i], m[j]
            ex = (degs[xi] + 1) * nu[i] + (degs[xj] + 1) * nu[j] + (degs[xi] + 1) * degs[xj]
            rest = m[:i] + m[i + 1:j] + m[j + 1:]
            for e, c in bracket.get((xi, xj), {}).items():
                s, mm = alg.sym_sort((e,) + rest)
                if s:
                    _acc(out, mm, (-1) ** ex * s * c)
    return out


class EnvElement:
    """Element of the (truncated) enveloping algebra: {word: coeff}."""

    __slots__ = ("alg", "W", "terms")

    def __init__(self, alg, terms=None, W=4):
        self.alg = alg
        self.W = W
        self.terms = {w: c for w, c in (terms or {}).items() if c and len(w) <= W}

    @classmethod
    def one(cls, alg, W=4):
        return cls(alg, {(): 1}, W)

    @classmethod
    def gen(cls, alg, name, W=4):
        i = alg.index[name] if isinstance(name, str) else name
        return cls(alg, {((i,),): 1}, W)

    def __add__(self, o):
        t = dict(self.terms)
        for w, c in o.terms.items():
            _acc(t, w, c)
        return EnvElement(self.alg, t, self.W)

    def __neg__(self):
        return EnvElement(self.alg, {w: -c for w, c in self.terms.items()}, self.W)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return EnvElement(self.alg, {w: c * o for w, c in self.terms.items()}, self.W)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                if len(w1) + len(w2) <= self.W:
                    _acc(t, w1 + w2, c1 * c2)
        return EnvElement(self.alg, t, self.W)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, EnvElement) and self.terms == o.terms

    def delta(self):
        return EnvElement(self.alg, self.alg.delta(self.terms, self.W), self.W)

    def __repr__(self):
        return " + ".join(f"{c}*{w}" for w, c in sorted(self.terms.items())) or "0"
