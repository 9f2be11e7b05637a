"""Chains [p] -> [n] x [r] and their combinatorics.

A chain is stored as its list of points.  Maximal chains are the lattice
paths from (0, 0) to (n, r); they index the top simplices of the standard
triangulation of the product of simplices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

from .dpalg import DPPoly, ZERO, pullback_index


@dataclass(frozen=True)
class Chain:
    n: int
    r: int
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        for a, b in pts:
            if not (0 <= a <= self.n and 0 <= b <= self.r):
                raise ValueError(f"point {(a, b)} outside [{self.n}]x[{self.r}]")
        for (a1, b1), (a2, b2) in zip(pts, pts[1:]):
            if not (a1 <= a2 and b1 <= b2) or (a1, b1) == (a2, b2):
                raise ValueError(f"points {pts} do not form an injective "
                                 "order-preserving map")

    @property
    def p(self):
        return len(self.points) - 1

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def cb(self):
        """chain_bs: first projection [p] -> [n]."""
        return tuple(a for a, _ in self.points)

    @property
    def cf(self):
        """chain_fs: second projection [p] -> [r]."""
        return tuple(b for _, b in self.points)

    def is_maximal(self):
        return self.p == self.n + self.r

    def is_global(self):
        return set(self.cb) == set(range(self.n + 1))

    def compose(self, beta):
        """The map Gamma o beta as a point tuple (not necessarily injective)."""
        return tuple(self.points[b] for b in beta)

    def face(self, v):
        """Gamma o delta_v (drop vertex v)."""
        return Chain(self.n, self.r, self.points[:v] + self.points[v + 1:])

    def to_json(self):
        return {"n": self.n, "r": self.r, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["n"], obj["r"], tuple(tuple(p) for p in obj["points"]))

    @cached_property
    def analysis(self):
        return analyze(self)


def enumerate_maximal(n, r):
    """All maximal chains of [n] x [r] in lexicographic order of point lists."""
    out = []

    def rec(a, b, acc):
        if a == n and b == r:
            out.append(Chain(n, r, tuple(acc)))
            return
        # (a, b+1) < (a+1, b) lexicographically, so try the fiber step first
        if b < r:
            acc.append((a, b + 1))
            rec(a, b + 1, acc)
            acc.pop()
        if a < n:
            acc.append((a + 1, b))
            rec(a + 1, b, acc)
            acc.pop()

    rec(0, 0, [(0, 0)])
    return out


def count_maximal(n, r):
    return comb(n + r, n)


def brute_force_maximal(n, r):
    """Exhaustive search over all injective order-preserving maps
    [n+r] -> [n] x [r] (test oracle)."""
    pts = [(a, b) for a in range(n + 1) for b in range(r + 1)]
    out = []
    for combo in itertools.combinations(pts, n + r + 1):
        ok = True
        for (a1, b1), (a2, b2) in zip(combo, combo[1:]):
            if not (a1 <= a2 and b1 <= b2):
                ok = False
                break
        if ok:
            out.append(Chain(n, r, combo))
    return sorted(out, key=lambda c: c.points)


def all_chains(n, r, p=None):
    """All chains (injective monotone maps) [p] -> [n] x [r]."""
    pts = sorted((a, b) for a in range(n + 1) for b in range(r + 1))
    lengths = range(1, n + r + 2) if p is None else [p + 1]
    for k in lengths:
        for combo in itertools.combinations(pts, k):
            if all(a1 <= a2 and b1 <= b2
                   for (a1, b1), (a2, b2) in zip(combo, combo[1:])):
                yield Chain(n, r, combo)


def global_chains(n, r, p=None):
    return [c for c in all_chains(n, r, p) if c.is_global()]


@dataclass(frozen=True)
class ChainAnalysis:
    chain: Chain
    bs: tuple            # [n] -> [p]
    fs: tuple            # [r] -> [p]; fs[0] = 0
    Fs: tuple            # 1..p-n -> [p], stored 0-based: Fs[i-1]
    us: tuple            # 1..p-n -> [p], stored 0-based
    blocks: tuple        # per block: (v_0, v_1, ..., v_{r_j})
    block_of: tuple      # F: 1..p-n -> 1..n_Gamma, stored 0-based
    inn_fs: frozenset
    inn_bs: frozenset
    out: frozenset
    vertices: frozenset  # [r] x| Gamma

    @property
    def k(self):
        return len(self.Fs)

    @property
    def n_blocks(self):
        return len(self.blocks)

    def block_sizes(self):
        return tuple(len(b) - 1 for b in self.blocks)

    def R(self, j, i):
        """R^j_i = r_1 + ... + r_{j-1} + i (blocks numbered from 1)."""
        return sum(len(b) - 1 for b in self.blocks[:j - 1]) + i

    def v(self, j, i):
        """Anchor vertex v^j_i (blocks numbered from 1)."""
        return self.blocks[j - 1][i]


def bs_of(chain):
    cb = chain.cb
    out = []
    for i in range(chain.n + 1):
        out.append(cb.index(i))
    return tuple(out)


def min_geq(seq, i):
    """min{j : seq[j] >= i}, or ZERO when empty (the x_{p+1} = 0 convention)."""
    for j, a in enumerate(seq):
        if a >= i:
            return j
    return ZERO


def analyze(chain):
    if not chain.is_global():
        raise ValueError(f"chain {chain.points} is not global")
    p = chain.p
    bs = bs_of(chain)
    cf = chain.cf
    fs = tuple(min_geq(cf, i) for i in range(chain.r + 1))
    imbs = set(bs)
    Fs = tuple(j for j in range(p + 1) if j not in imbs)
    k = len(Fs)
    assert k == p - chain.n
    diffs = [Fs[i] - (i + 1) for i in range(k)]
    us = []
    for i in range(k):
        first = min(j for j in range(k) if diffs[j] == diffs[i])
        us.append(Fs[first] - 1)
    us = tuple(us)
    # blocks: runs of equal Fs(i) - i
    block_of = []
    blocks = []
    for i in range(k):
        if i == 0 or diffs[i] != diffs[i - 1]:
            blocks.append([us[i]])
        blocks[-1].append(Fs[i])
        block_of.append(len(blocks) - 1)
    blocks = tuple(tuple(b) for b in blocks)
    vertices = frozenset(v for b in blocks for v in b)
    pts = chain.points
    inn_fs, inn_bs, out = set(), set(), set()
    for v in vertices:
        if 0 < v < p:
            a0, b0 = pts[v - 1]
            if pts[v + 1] == (a0 + 1, b0 + 1):
                a, b = pts[v]
                if (a + 1, b) == pts[v + 1]:
                    inn_fs.add(v)
                    continue
                if (a, b + 1) == pts[v + 1]:
                    inn_bs.add(v)
                    continue
        out.add(v)
    return ChainAnalysis(chain, bs, fs, Fs, us, blocks, tuple(block_of),
                         frozenset(inn_fs), frozenset(inn_bs),
                         frozenset(out), vertices)


def flip(chain, v):
    """The other maximal chain sharing the face Gamma o delta_v."""
    an = chain.analysis
    pts = list(chain.points)
    a, b = pts[v - 1]
    if v in an.inn_fs:
        pts[v] = (a + 1, b)
    elif v in an.inn_bs:
        pts[v] = (a, b + 1)
    else:
        raise ValueError(f"vertex {v} is not an inner vertex of {chain.points}")
    return Chain(chain.n, chain.r, tuple(pts))


def pushforward_pair(chain, alpha, n):
    """(alpha_* Gamma, Gamma^* alpha) with (alpha x id) Gamma = alpha_*Gamma o beta.

    alpha: [m] -> [n].  Built from beta(i) = alpha(cb(i)) + cf(i); the new
    chain is the lattice path whose j-th fiber step sits over
    alpha(cb(fs(j))).
    """
    alpha = tuple(alpha)
    if not chain.is_maximal():
        raise ValueError("pushforward_pair needs a maximal chain")
    if len(alpha) != chain.n + 1:
        raise ValueError("alpha has the wrong domain")
    if any(a > b for a, b in zip(alpha, alpha[1:])) or (alpha and alpha[-1] > n):
        raise ValueError(f"alpha {alpha} is not an order-preserving map into [{n}]")
    r = chain.r
    cb, cf = chain.cb, chain.cf
    fs = chain.analysis.fs
    steps = [alpha[cb[fs[j]]] for j in range(1, r + 1)]
    pts = [(0, 0)]
    a = b = 0
    for j in range(1, r + 1):
        while a < steps[j - 1]:
            a += 1
            pts.append((a, b))
        b += 1
        pts.append((a, b))
    while a < n:
        a += 1
        pts.append((a, b))
    new = Chain(n, r, tuple(pts))
    beta = tuple(alpha[cb[i]] + cf[i] for i in range(chain.p + 1))
    return new, beta


def brute_force_pushforward(chain, alpha, n):
    """All (Gamma', beta) with (alpha x id) Gamma = Gamma' beta (test oracle)."""
    target = [(alpha[a], b) for a, b in chain.points]
    sols = []
    for c in enumerate_maximal(n, chain.r):
        idx = {pt: i for i, pt in enumerate(c.points)}
        if all(t in idx for t in target):
            beta = tuple(idx[t] for t in target)
            sols.append((c, beta))
    return sols


def pullback(chain, alpha):
    """Pullback of a maximal chain along alpha x id for injective alpha.

    Returns (Gamma_2, beta) where Gamma_2 lists the points (i, b) with
    (alpha(i), b) on Gamma, and beta gives their positions on Gamma.
    """
    alpha = tuple(alpha)
    if len(set(alpha)) != len(alpha):
        raise ValueError(f"alpha {alpha} is not injective")
    inv = {a: i for i, a in enumerate(alpha)}
    pts, beta = [], []
    for j, (a, b) in enumerate(chain.points):
        if a in inv:
            pts.append((inv[a], b))
            beta.append(j)
    return Chain(len(alpha) - 1, chain.r, tuple(pts)), tuple(beta)


def brute_force_pullback(chain, alpha):
    """Pullback poset {(i, j) : (alpha(i), b) = Gamma(j)} by full search."""
    m = len(alpha) - 1
    elems = []
    for i in range(m + 1):
        for b in range(chain.r + 1):
            for j, pt in enumerate(chain.points):
                if pt == (alpha[i], b):
                    elems.append(((i, b), j))
    return elems


def face_factor(chain, v):
    """The unique (Gamma_v, h) with Gamma o delta_v = (id x delta_h) Gamma_v."""
    sols = brute_force_face_factor(chain, v)
    if len(sols) != 1:
        raise ValueError(f"vertex {v} admits {len(sols)} factorizations")
    return sols[0]


def face_factor_formula(chain, v, corrected=True):
    """Closed form for the factorization at vertex v.

    The printed formula uses (cb(i), cf(i+1) - 1) for i >= v; the corrected
    one uses (cb(i+1), cf(i+1) - 1), which is what the face Gamma o delta_v
    forces.
    """
    cb, cf = chain.cb, chain.cf
    h = cf[v]
    pts = []
    for i in range(chain.p):
        if i < v:
            pts.append(chain.points[i])
        elif corrected:
            pts.append((cb[i + 1], cf[i + 1] - 1))
        else:
            pts.append((cb[i], cf[i + 1] - 1))
    return Chain(chain.n, chain.r - 1, tuple(pts)), h


def brute_force_face_factor(chain, v):
    face = chain.points[:v] + chain.points[v + 1:]
    sols = []
    if chain.r == 0:
        return sols
    for h in range(chain.r + 1):
        # delta_h: [r-1] -> [r] skips h
        inv = {}
        for b in range(chain.r):
            inv[b if b < h else b + 1] = b
        if any(b not in inv for _, b in face):
            continue
        pts = tuple((a, inv[b]) for a, b in face)
        try:
            c = Chain(chain.n, chain.r - 1, pts)
        except ValueError:
            continue
        if c.is_maximal():
            sols.append((c, h))
    return sols


def out_interior(chain):
    """Out-vertices strictly inside their block: v^j_i with 0 < i < r_j."""
    an = chain.analysis
    res = []
    for blk in an.blocks:
        for i in range(1, len(blk) - 1):
            if blk[i] in an.out:
                res.append(blk[i])
    return res


def factorizable_vertices(chain):
    """Vertices v where Gamma o delta_v factors through [n] x [r-1]."""
    return [v for v in range(chain.p + 1) if brute_force_face_factor(chain, v)]


def partition_check(n, r):
    """Check that the maximal chains cover [n] x [r] and that gluing along
    flips identifies exactly the shared faces.  Returns (covered, glued)."""
    chains = enumerate_maximal(n, r)
    covered = set()
    for c in chains:
        covered.update(c.points)
    all_pts = {(a, b) for a in range(n + 1) for b in range(r + 1)}
    glued = set()
    for c in chains:
        an = c.analysis
        for v in an.inn_fs | an.inn_bs:
            c2 = flip(c, v)
            glued.add(frozenset((c.face(v).points, c2.face(v).points)))
    # every interior wall must be shared by exactly two chains
    faces = {}
    for c in chains:
        for v in range(c.p + 1):
            faces.setdefault(c.face(v).points, []).append(c)
    shared = {f for f, cs in faces.items() if len(cs) == 2}
    walls = {next(iter(g)) for g in glued}
    return covered == all_pts, shared == walls and all(
        len(cs) <= 2 for cs in faces.values())


# embeddings incl / re between the (n+r)-simplex and the product coordinates
#
# The product algebra Z<t, b_1..b_n, f_1..f_r> is stored as a DPPoly with
# n + r variables: slot j is b_j for 1 <= j <= n and slot n + j is f_j.


def incl_slots(chain):
    """Slot image of x_i under incl_Gamma, for i = 0..n+r."""
    an = chain.analysis
    n = chain.n
    img = [0] * (chain.p + 1)
    for j in range(1, n + 1):
        img[an.bs[j]] = j
    for j in range(1, chain.r + 1):
        img[an.fs[j]] = n + j
    return img


def incl(chain, f):
    from .dpalg import _push_exponents
    return _push_exponents(f, incl_slots(chain), chain.n + chain.r)


def re(chain, f):
    """b_i -> x_{bs(i)}, f_i -> x_{fs(i)}."""
    from .dpalg import _push_exponents
    an = chain.analysis
    n = chain.n
    img = [0] + [an.bs[j] for j in range(1, n + 1)] + \
        [an.fs[j] for j in range(1, chain.r + 1)]
    return _push_exponents(f, img, chain.p)


def product_base_map(f, alpha, n, r):
    """alpha acting on Z<t, b, f>: b_i -> b_{min{j: alpha(j) >= i}} or 0."""
    from .dpalg import _push_exponents
    m = len(alpha) - 1
    img = [0] + [pullback_index(alpha, i) for i in range(1, n + 1)] + \
        [m + j for j in range(1, r + 1)]
    return _push_exponents(f, img, m + r)


# lemma checkers; each returns a list of counterexamples (empty = pass)

def _injective_maps(m, n):
    return [tuple(c) for c in itertools.combinations(range(n + 1), m + 1)]


def _monotone_maps(m, n):
    return [tuple(c) for c in itertools.combinations_with_replacement(range(n + 1), m + 1)]


def check_maximal_global(n, r):
    bad = [c for c in brute_force_maximal(n, r) if not c.is_global()]
    return bad


def check_slot_injective(n, r):
    bad = []
    for c in enumerate_maximal(n, r):
        an = c.analysis
        if len(set(an.bs)) != len(an.bs) or len(set(an.fs)) != len(an.fs):
            bad.append(c)
        elif set(an.bs) & set(an.fs) != {0} or set(an.bs) | set(an.fs) != set(range(c.p + 1)):
            bad.append(c)
        elif tuple(an.fs[1:]) != an.Fs:
            bad.append(c)
    return bad


def check_coordinate_sum(n, r):
    return [c for c in enumerate_maximal(n, r)
            if any(a + b != i for i, (a, b) in enumerate(c.points))]


def check_block_top_face(n, r):
    bad = []
    for c in enumerate_maximal(n, r):
        an = c.analysis
        for j, blk in enumerate(an.blocks, 1):
            for v in blk:
                bs2 = c.face(v).analysis.bs
                for l, blk_l in enumerate(an.blocks, 1):
                    top = blk_l[-1]
                    lhs = min_geq(an.bs, top + 1)
                    rhs = min_geq(bs2, top + 1 if l < j else top)
                    if lhs != rhs:
                        bad.append((c, v, l))
    return bad


def check_inner_face_shift(n, r):
    bad = []
    for c in enumerate_maximal(n, r):
        an = c.analysis
        for v in an.inn_fs | an.inn_bs:
            bs2 = c.face(v).analysis.bs
            for i in range(c.p + 2):
                lhs = min_geq(an.bs, i)
                if i <= v:
                    rhs = min_geq(bs2, i)
                elif v in an.inn_fs or i > v + 1:
                    rhs = min_geq(bs2, i - 1)
                else:
                    continue
                if lhs != rhs:
                    bad.append((c, v, i))
    return bad


def _squares(n, r, injective=False, mmax=3):
    """All commuting squares (Gamma_2 over [m], alpha, Gamma_1, beta) from
    pushforward_pair, for m <= max(n, mmax)."""
    for m in range(max(n, mmax) + 1):
        maps = _injective_maps(m, n) if injective else _monotone_maps(m, n)
        for c2 in enumerate_maximal(m, r):
            for alpha in maps:
                c1, beta = pushforward_pair(c2, alpha, n)
                yield c2, alpha, c1, beta


def check_injective_pullback(n, r):
    """Pullbacks along injective alpha are chains (totally ordered) and
    beta o bs_2 = bs_1 o alpha."""
    bad = []
    for c1 in enumerate_maximal(n, r):
        for m in range(n + 1):
            for alpha in _injective_maps(m, n):
                try:
                    c2, beta = pullback(c1, alpha)
                except ValueError:
                    bad.append((c1, alpha, "not a chain"))
                    continue
                # agrees with the brute-force poset pullback
                if [(pt, j) for pt, j in zip(c2.points, beta)] != brute_force_pullback(c1, alpha):
                    bad.append((c1, alpha, "poset"))
                    continue
                bs1, bs2 = c1.analysis.bs, c2.analysis.bs
                if tuple(beta[b] for b in bs2) != tuple(bs1[a] for a in alpha):
                    bad.append((c1, alpha, "bs"))
    return bad


def check_fs_square(n, r):
    bad = []
    for c2, alpha, c1, beta in _squares(n, r):
        a1, a2 = c1.analysis, c2.analysis
        if tuple(beta[a2.fs[i]] for i in range(1, r + 1)) != tuple(a1.fs[1:]):
            bad.append((c2, alpha))
    return bad


def check_us_square(n, r, injective=False):
    """beta o us_2 = us_1.  With injective=False every order-preserving
    alpha is tried, as the statement quantifies; a degeneracy can merge two
    fiber blocks of Gamma_2 and then the identity fails."""
    bad = []
    for c2, alpha, c1, beta in _squares(n, r, injective=injective):
        if tuple(beta[u] for u in c2.analysis.us) != c1.analysis.us:
            bad.append((c2, alpha))
    return bad


def check_fs_successor(n, r):
    bad = []
    for c2, alpha, c1, beta in _squares(n, r, injective=True):
        a1, a2 = c1.analysis, c2.analysis
        for i in range(1, r + 1):
            lhs = min_geq(beta, a1.fs[i] + 1)
            rhs = a2.fs[i] + 1
            if rhs > c2.p:
                rhs = ZERO
            if lhs != rhs:
                bad.append((c2, alpha, i))
    return bad


def check_nonmaximal_witness(n, r):
    bad = []
    for c1 in enumerate_maximal(n, r):
        bs1 = c1.analysis.bs
        for m in range(n + 1):
            for alpha in _injective_maps(m, n):
                c2, _ = pullback(c1, alpha)
                if c2.is_maximal():
                    continue
                witness = [l for l in range(n + 1) if l not in alpha
                           and bs1[l] + 1 not in bs1]
                if not witness:
                    bad.append((c1, alpha))
    return bad


def check_pushforward_unique(n, r):
    bad = []
    for c2, alpha, c1, beta in _squares(n, r):
        sols = brute_force_pushforward(c2, alpha, n)
        if sols != [(c1, beta)]:
            bad.append((c2, alpha))
    return bad


def check_face_factor(n, r):
    bad = []
    for c in enumerate_maximal(n, r):
        for v in factorizable_vertices(c):
            sols = brute_force_face_factor(c, v)
            if len(sols) != 1 or face_factor_formula(c, v) != sols[0]:
                bad.append((c, v))
    return bad


def check_partition(n, r):
    covered, glued = partition_check(n, r)
    return [] if covered and glued else [(n, r)]


GLUEING_CHECKS = {
    "maximal chains are global": check_maximal_global,
    "bs and fs injective": check_slot_injective,
    "coordinate sum": check_coordinate_sum,
    "block tops under faces": check_block_top_face,
    "inner faces shift bs": check_inner_face_shift,
    "injective pullback": check_injective_pullback,
    "fs square": check_fs_square,
    "us square": check_us_square,
    "fs successor": check_fs_successor,
    "non-maximal witness": check_nonmaximal_witness,
    "pushforward unique": check_pushforward_unique,
    "face factorization": check_face_factor,
    "partition": check_partition,
}
