"""Divided power polynomials over the integers.

An element of Z<t, x_1, ..., x_n> is stored as a dict from exponent tuples
(N_0, N_1, ..., N_n) to nonzero ints.  Slot 0 is the distinguished variable
t (theta); a monomial x^[N] behaves like x^N / N!, so

    x^[M] * x^[N] = C(M+N, M) x^[M+N].

Integration bounds are plain ints: THETA (0), a variable index i >= 1, or
ZERO (-1).
"""

from __future__ import annotations

import json
from math import comb

THETA = 0
ZERO = -1


def _check_bound(b, nvars):
    if b != ZERO and not 0 <= b <= nvars:
        raise ValueError(f"bound {b} out of range for {nvars} variables")


def mono_mul(m1, m2):
    """Multiply two monomials.  Returns (coefficient, exponents)."""
    c = 1
    for a, b in zip(m1, m2):
        if a and b:
            c *= comb(a + b, a)
    return c, tuple(a + b for a, b in zip(m1, m2))


def _glex(m):
    return (sum(m), m)


class DPPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        if terms is None:
            terms = {}
        else:
            terms = {m: c for m, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already has no zeros
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars, c=1):
        return cls(nvars, {(0,) * (nvars + 1): c})

    @classmethod
    def monomial(cls, nvars, exps, c=1):
        exps = tuple(exps)
        if len(exps) != nvars + 1:
            raise ValueError("exponent vector must have nvars + 1 entries")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        return cls(nvars, {exps: c})

    @classmethod
    def var(cls, nvars, i, power=1, c=1):
        """c * x_i^[power]; i = 0 gives theta."""
        if not 0 <= i <= nvars:
            raise ValueError(f"variable {i} out of range")
        e = [0] * (nvars + 1)
        e[i] = power
        return cls(nvars, {tuple(e): c})

    @classmethod
    def bound_power(cls, nvars, b, power):
        """b^[power] for a bound b."""
        if b == ZERO:
            return cls.const(nvars) if power == 0 else cls.zero(nvars)
        return cls.var(nvars, b, power)

    # basic protocol

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _glex(t[0]))

    def __eq__(self, other):
        if isinstance(other, int):
            return self == DPPoly.const(self.nvars, other)
        if not isinstance(other, DPPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            fac = []
            for i, e in enumerate(m):
                if e:
                    name = "t" if i == 0 else f"x{i}"
                    fac.append(name if e == 1 else f"{name}^[{e}]")
            body = "*".join(fac)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def _same(self, other):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    # ring operations

    def __add__(self, other):
        if isinstance(other, int):
            other = DPPoly.const(self.nvars, other)
        self._same(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return DPPoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return DPPoly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = DPPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        if not k:
            return DPPoly.zero(self.nvars)
        return DPPoly._raw(self.nvars, {m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return dp_mul(self, other)

    __rmul__ = __mul__

    # calculus

    def partial(self, i):
        return partial(self, i)

    def substitute(self, eps):
        return substitute(self, eps)

    def to_json(self):
        return {"nvars": self.nvars,
                "terms": [{"c": str(c), "e": list(m)}
                          for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = obj["nvars"]
        terms = {}
        for t in obj["terms"]:
            e = tuple(t["e"])
            if len(e) != n + 1:
                raise ValueError("exponent vector has wrong length")
            terms[e] = terms.get(e, 0) + int(t["c"])
        return cls(n, terms)


def dp_mul(a, b):
    a._same(b)
    return DPPoly._raw(a.nvars, _mul_terms(a.terms, b.terms))


def _mul_terms(ta, tb):
    out = {}
    for m1, c1 in ta.items():
        for m2, c2 in tb.items():
            c = c1 * c2
            for x, y in zip(m1, m2):
                if x and y:
                    c *= comb(x + y, x)
            m = tuple(x + y for x, y in zip(m1, m2))
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def substitute(f, eps):
    """Algebra map sending x_i to eps[i] (an index or ZERO).

    eps is a mapping or sequence over 0..nvars; eps[0] must be THETA.
    The result lives in the same number of variables.
    """
    n = f.nvars
    img = [eps[i] for i in range(n + 1)]
    if img[0] != THETA:
        raise ValueError("substitution must fix theta")
    for b in img:
        _check_bound(b, n)
    return _push_exponents(f, img, n)


def _push_exponents(f, img, target_nvars):
    """Send slot i to slot img[i] (ZERO kills positive powers)."""
    out = {}
    for m, c in f.terms.items():
        e = [0] * (target_nvars + 1)
        coef = c
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
            key = tuple(e)
            v = out.get(key, 0) + coef
            if v:
                out[key] = v
            else:
                del out[key]
    return DPPoly._raw(target_nvars, out)


def check_monotone(alpha, n=None):
    alpha = tuple(alpha)
    for a, b in zip(alpha, alpha[1:]):
        if a > b:
            raise ValueError(f"map {alpha} is not order-preserving")
    if n is not None and alpha and (alpha[0] < 0 or alpha[-1] > n):
        raise ValueError(f"map {alpha} does not land in [{n}]")
    return alpha


def pullback_index(alpha, i):
    """min{j : alpha(j) >= i}, or ZERO if alpha(m) < i."""
    for j, a in enumerate(alpha):
        if a >= i:
            return j
    return ZERO


def ordinal_pullback(f, alpha):
    """alpha^*: Z<t, x_1..x_n> -> Z<t, x_1..x_m> for alpha: [m] -> [n].

    alpha is a sequence (alpha(0), ..., alpha(m)).
    """
    alpha = check_monotone(alpha, f.nvars)
    img = [pullback_index(alpha, i) for i in range(f.nvars + 1)]
    return _push_exponents(f, img, len(alpha) - 1)


def partial(f, i):
    if not 1 <= i <= f.nvars:
        raise ValueError(f"partial index {i} out of range")
    out = {}
    for m, c in f.terms.items():
        if m[i]:
            e = list(m)
            e[i] -= 1
            out[tuple(e)] = c
    return DPPoly._raw(f.nvars, out)


def definite_integral(f, i, lower, upper):
    """Integral of f dx_i from lower to upper.

    Each x_i^[N] is replaced by upper^[N+1] - lower^[N+1].
    """
    n = f.nvars
    if not 1 <= i <= n:
        raise ValueError(f"integration variable {i} out of range")
    _check_bound(lower, n)
    _check_bound(upper, n)
    out = {}
    for m, c in f.terms.items():
        k = m[i] + 1
        rest = list(m)
        rest[i] = 0
        for b, s in ((upper, c), (lower, -c)):
            if b == ZERO:
                continue
            e = list(rest)
            coef = s
            if e[b]:
                coef *= comb(e[b] + k, k)
            e[b] += k
            key = tuple(e)
            v = out.get(key, 0) + coef
            if v:
                out[key] = v
            else:
                del out[key]
    return DPPoly._raw(n, out)


def eps_bar(f, i, b):
    """The substitution x_i -> b fixing all other variables."""
    img = list(range(f.nvars + 1))
    img[i] = b
    return substitute(f, img)


def to_rational(f, symbols=None):
    """Image under x^[N] -> x^N / N! as a sympy expression (test oracle)."""
    import sympy

    if symbols is None:
        symbols = sympy.symbols(" ".join(["t"] + [f"x{i}" for i in range(1, f.nvars + 1)]))
        if f.nvars == 0:
            symbols = (symbols,)
    expr = sympy.Integer(0)
    for m, c in f.terms.items():
        term = sympy.Integer(c)
        for s, e in zip(symbols, m):
            if e:
                term *= s**e / sympy.factorial(e)
        expr += term
    return sympy.expand(expr)


def random_poly(rng, nvars, degree=5, nterms=4, coeff=9):
    """A random polynomial with total degree <= degree."""
    terms = {}
    for _ in range(nterms):
        e = [0] * (nvars + 1)
        for _ in range(rng.randint(0, degree)):
            e[rng.randint(0, nvars)] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.randint(-coeff, coeff)
    return DPPoly(nvars, terms)


# calculus identities for the iterated integral

def bounds(nvars):
    return [THETA, ZERO] + list(range(1, nvars + 1))


def fundamental_theorem_residuals(f, i):
    """int_X^Y d_i f dx_i - (f|x_i=Y - f|x_i=X) over all bound pairs."""
    g = partial(f, i)
    out = []
    for X in bounds(f.nvars):
        for Y in bounds(f.nvars):
            r = definite_integral(g, i, X, Y) - (eps_bar(f, i, Y) - eps_bar(f, i, X))
            if r:
                out.append(((X, Y), r))
    return out


def integration_by_parts_residuals(f, g, i):
    fg = f * g
    out = []
    for X in bounds(f.nvars):
        for Y in bounds(f.nvars):
            lhs = definite_integral(f * partial(g, i), i, X, Y)
            rhs = (eps_bar(fg, i, Y) - eps_bar(fg, i, X)
                   - definite_integral(partial(f, i) * g, i, X, Y))
            if lhs != rhs:
                out.append(((X, Y), lhs - rhs))
    return out


def lower_bound_derivative_residuals(f, i):
    """d/dx_j int_{x_j}^Y f dx_i + f|x_i=x_j, for f free of x_j and Y != x_j."""
    out = []
    for j in range(1, f.nvars + 1):
        if any(m[j] for m in f.terms):
            continue
        for Y in bounds(f.nvars):
            if Y == j:
                continue
            r = partial(definite_integral(f, i, j, Y), j) + eps_bar(f, i, j)
            if r:
                out.append(((j, Y), r))
    return out


def calculus_suite(samples=500, seed=0, max_vars=4, degree=5, coeff=9):
    """Run the three identities on random polynomials; returns (checked, failures)."""
    import random

    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        n = rng.randint(1, max_vars)
        i = rng.randint(1, n)
        f = random_poly(rng, n, degree, 4, coeff)
        g = random_poly(rng, n, degree, 4, coeff)
        for name, res in (("fundamental theorem", fundamental_theorem_residuals(f, i)),
                          ("integration by parts", integration_by_parts_residuals(f, g, i))):
            failures += [(name, f, i, b, r) for b, r in res]
        j = rng.randint(1, n)
        free = DPPoly(n, {m: c for m, c in f.terms.items() if not m[j]})
        failures += [("lower bound derivative", free, i, b, r)
                     for b, r in lower_bound_derivative_residuals(free, i)]
    return samples, failures
