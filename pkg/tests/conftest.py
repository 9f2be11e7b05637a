import sympy
from hypothesis import settings, strategies as st

from simplicial_holonomy.derham import GForm
from simplicial_holonomy.dpalg import DPPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def polys(draw, nvars=None, max_nvars=4, degree=5, coeff=9, max_terms=4):
    n = draw(st.integers(1, max_nvars)) if nvars is None else nvars
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = [0] * (n + 1)
        for _ in range(draw(st.integers(0, degree))):
            e[draw(st.integers(0, n))] += 1
        terms[tuple(e)] = draw(st.integers(-coeff, coeff))
    return DPPoly(n, terms)


@st.composite
def monotone_maps(draw, n, max_m=4):
    m = draw(st.integers(0, max_m))
    return tuple(sorted(draw(st.integers(0, n)) for _ in range(m + 1)))


@st.composite
def gforms(draw, n, W=3, degs=(), max_terms=3, letters=()):
    out = GForm.zero(n, W, degs)
    for _ in range(draw(st.integers(0, max_terms))):
        f = draw(polys(nvars=n, degree=3, coeff=5, max_terms=2))
        S = tuple(sorted(draw(st.sets(st.integers(1, n), max_size=n)))) if n else ()
        w = tuple(draw(st.lists(st.sampled_from(letters), max_size=2))) if letters else ()
        out = out + GForm.from_poly(f, S, w, W, degs)
    return out


def rational(f):
    from simplicial_holonomy.dpalg import to_rational
    return to_rational(f)


def symbols(n):
    return sympy.symbols(" ".join(["t"] + [f"x{i}" for i in range(1, n + 1)]))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for i in sorted(lines):
            terminalreporter.write_line(lines[i])
