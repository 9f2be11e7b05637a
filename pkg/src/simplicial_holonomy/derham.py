"""Divided power de Rham forms on standard simplices, with enveloping-algebra
coefficients.

A GForm on the n-simplex is a finite sum of terms

    c * w (x) t^[N_0] x_1^[N_1] ... x_n^[N_n] dx_S

stored as {(w, S, N): c}.  The word w is a tuple of letters, each letter a
sorted tuple of basis indices of an L-infinity algebra (a symmetric monomial
of the suspended algebra, desuspended once).  Letters of a word of length
> W are dropped, which is an exact quotient because every operation here
can only make words longer.

Grading: a term has env degree p (sum of letter degrees) and form degree
q = |S|; its total degree is q - p.
"""

from __future__ import annotations

from math import comb

from .dpalg import DPPoly, ZERO, check_monotone, pullback_index


def letter_degree(letter, degs):
    return sum(degs[b] + 1 for b in letter) - 1


def word_degree(word, degs):
    return sum(letter_degree(l, degs) for l in word)


def merge_sign(s1, s2):
    """Sign of sorting s1 + s2 (both increasing), 0 if they overlap."""
    if not s1 or not s2:
        return 1
    inv = 0
    for a in s1:
        for b in s2:
            if a == b:
                return 0
            if a > b:
                inv += 1
    return -1 if inv & 1 else 1


def sort_sign(seq):
    """(sign, sorted tuple) of a list of distinct ints; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def _acc(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class GForm:
    __slots__ = ("n", "W", "degs", "terms")

    def __init__(self, n, terms=None, W=4, degs=()):
        self.n = n
        self.W = W
        self.degs = tuple(degs)
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c and len(k[0]) <= W:
                    self.terms[k] = c

    def _new(self, terms, n=None):
        g = GForm.__new__(GForm)
        g.n = self.n if n is None else n
        g.W = self.W
        g.degs = self.degs
        g.terms = terms
        return g

    # constructors

    @classmethod
    def zero(cls, n, W=4, degs=()):
        return cls(n, None, W, degs)

    @classmethod
    def from_poly(cls, f, dx=(), word=(), W=4, degs=(), c=1):
        s, dx = sort_sign(dx)
        g = cls(f.nvars, None, W, degs)
        if not s or len(word) > W:
            return g
        for m, v in f.terms.items():
            g.terms[(tuple(word), dx, m)] = s * c * v
        return g

    @classmethod
    def one(cls, n, W=4, degs=()):
        return cls.from_poly(DPPoly.const(n), W=W, degs=degs)

    @classmethod
    def dx(cls, n, *idx, W=4, degs=()):
        return cls.from_poly(DPPoly.const(n), dx=idx, W=W, degs=degs)

    def like(self, f, dx=(), word=(), c=1):
        """A GForm with this one's truncation and degrees."""
        return GForm.from_poly(f, dx, word, self.W, self.degs, c)

    # inspection

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def bidegrees(self):
        return {(word_degree(w, self.degs), len(S)) for (w, S, _) in self.terms}

    def total_degrees(self):
        return {q - p for p, q in self.bidegrees()}

    def degree(self):
        """Total degree q - p of a homogeneous form."""
        ds = self.total_degrees()
        if len(ds) > 1:
            raise ValueError(f"form is not homogeneous: degrees {sorted(ds)}")
        return ds.pop() if ds else 0

    def components(self):
        """{(word, S): DPPoly} grouping of the terms."""
        out = {}
        for (w, S, m), c in self.terms.items():
            out.setdefault((w, S), {})[m] = c
        return {k: DPPoly(self.n, v) for k, v in out.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, S), f in sorted(self.components().items()):
            env = "".join("[" + ",".join(map(str, l)) + "]" for l in w) or "1"
            dx = "".join(f" dx{i}" for i in S)
            parts.append(f"{env} (x) ({f}){dx}")
        return " + ".join(parts)

    # linear structure

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"simplex dimension mismatch: {self.n} vs {other.n}")
        if self.W != other.W:
            raise ValueError(f"truncation mismatch: W={self.W} vs W={other.W}")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            _acc(t, k, c)
        return self._new(t)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        if not k:
            return self._new({})
        return self._new({t: c * k for t, c in self.terms.items()})

    def __rmul__(self, k):
        return self.scale(k)

    # products

    def wedge(self, other):
        """(v1 (x) w1) ^ (v2 (x) w2) = (-1)^{|w1| |v2|} v1 v2 (x) w1 ^ w2."""
        self._check(other)
        out = {}
        degs = self.degs
        W = self.W
        pdeg = {}
        for (w2, S2, m2), c2 in other.terms.items():
            if w2 not in pdeg:
                pdeg[w2] = word_degree(w2, degs)
        for (w1, S1, m1), c1 in self.terms.items():
            q1 = len(S1)
            for (w2, S2, m2), c2 in other.terms.items():
                if len(w1) + len(w2) > W:
                    continue
                s = merge_sign(S1, S2)
                if not s:
                    continue
                if q1 & 1 and pdeg[w2] & 1:
                    s = -s
                c = s * c1 * c2
                for x, y in zip(m1, m2):
                    if x and y:
                        c *= comb(x + y, x)
                m = tuple(x + y for x, y in zip(m1, m2))
                S = tuple(sorted(S1 + S2))
                _acc(out, (w1 + w2, S, m), c)
        return self._new(out)

    __xor__ = wedge

    def d(self, koszul=True):
        """d(v (x) f dx_S) = (-1)^{|v|} v (x) sum_i d_i f dx_i ^ dx_S.

        The sign makes d a graded derivation for the total degree q - p
        under the wedge sign rule; koszul=False drops it (then Leibniz only
        holds when the right factor has even env degree).
        """
        out = {}
        for (w, S, m), c in self.terms.items():
            if koszul and word_degree(w, self.degs) & 1:
                c = -c
            for i in range(1, self.n + 1):
                if not m[i] or i in S:
                    continue
                pos = sum(1 for j in S if j < i)
                e = list(m)
                e[i] -= 1
                S2 = tuple(sorted(S + (i,)))
                _acc(out, (w, S2, tuple(e)), -c if pos & 1 else c)
        return self._new(out)

    def pullback(self, alpha):
        """alpha^* for alpha: [m] -> [n], given as (alpha(0), ..., alpha(m))."""
        alpha = check_monotone(alpha, self.n)
        img = [pullback_index(alpha, i) for i in range(self.n + 1)]
        return self.remap(img, len(alpha) - 1)

    def remap(self, img, m_):
        """Algebra map x_i -> x_{img[i]}, dx_i -> dx_{img[i]} into m_ slots.

        img[i] may be ZERO (kills x_i and dx_i); img[i] = 0 sends x_i to
        theta and dx_i to 0.
        """
        out = {}
        for (w, S, m), c in self.terms.items():
            dxs = []
            for i in S:
                j = img[i]
                if j == ZERO or j == 0:
                    break
                dxs.append(j)
            else:
                s, S2 = sort_sign(dxs)
                if not s:
                    continue
                e = [0] * (m_ + 1)
                coef = s * c
                for i, k in enumerate(m):
                    if not k:
                        continue
                    j = img[i]
                    if j == ZERO:
                        coef = 0
                        break
                    if e[j]:
                        coef *= comb(e[j] + k, k)
                    e[j] += k
                if coef:
                    _acc(out, (w, S2, tuple(e)), coef)
        return self._new(out, n=m_)

    def contract(self, i):
        """Interior product with the dual of dx_i (acts on the form factor)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"contraction index {i} out of range")
        out = {}
        for (w, S, m), c in self.terms.items():
            if i in S:
                k = S.index(i)
                _acc(out, (w, S[:k] + S[k + 1:], m), -c if k & 1 else c)
        return self._new(out)

    def map_polys(self, fn, n=None):
        """Apply a linear map DPPoly -> DPPoly to every coefficient."""
        out = {}
        for (w, S), f in self.components().items():
            g = fn(f)
            for m, c in g.terms.items():
                _acc(out, (w, S, m), c)
        return self._new(out, n=n)

    def map_env(self, fn):
        """Apply a linear map on words, fn(word) -> {word: coeff}, to the
        env factor.  No sign is introduced."""
        out = {}
        for (w, S, m), c in self.terms.items():
            for w2, k in fn(w).items():
                if len(w2) <= self.W:
                    _acc(out, (w2, S, m), c * k)
        return self._new(out)

    def truncate(self, W):
        g = GForm(self.n, self.terms, W, self.degs)
        return g

    def component(self, word=None, dx=None):
        """Coefficient polynomial of a given (word, dx) pair."""
        out = {}
        for (w, S, m), c in self.terms.items():
            if (word is None or w == tuple(word)) and (dx is None or S == tuple(dx)):
                out[m] = out.get(m, 0) + c
        return DPPoly(self.n, out)

    # serialization

    def to_json(self):
        items = []
        for (w, S), f in sorted(self.components().items()):
            items.append({"env": [list(l) for l in w], "poly": f.to_json(),
                          "dx": list(S)})
        return {"n": self.n, "trunc": self.W, "degs": list(self.degs),
                "terms": items}

    @classmethod
    def from_json(cls, obj):
        g = cls(obj["n"], None, obj["trunc"], obj.get("degs", ()))
        out = {}
        for t in obj["terms"]:
            f = DPPoly.from_json(t["poly"])
            if f.nvars != g.n:
                raise ValueError("polynomial variable count does not match n")
            s, S = sort_sign(t["dx"])
            if not s:
                continue
            w = tuple(tuple(l) for l in t["env"])
            for m, c in f.terms.items():
                _acc(out, (w, S, m), s * c)
        g.terms = {k: c for k, c in out.items() if len(k[0]) <= g.W}
        return g


def compose(alpha, beta):
    """alpha o beta for ordinal maps given as value tuples."""
    return tuple(alpha[b] for b in beta)


def identity(n):
    return tuple(range(n + 1))


def delta(n, i):
    """Coface delta_i: [n-1] -> [n] skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def sigma(n, i):
    """Codegeneracy sigma_i: [n+1] -> [n] hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def ordinal_maps(m, n):
    """All order-preserving maps [m] -> [n]."""
    def rec(k, lo):
        if k == m + 1:
            yield ()
            return
        for v in range(lo, n + 1):
            for rest in rec(k + 1, v):
                yield (v,) + rest
    yield from rec(0, 0)
