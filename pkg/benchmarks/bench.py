"""Wall-clock timings for the hot paths: polynomial products, chain
enumeration, one Stokes suite and holonomy.  Run: python3 benchmarks/bench.py"""

import random
import time

from simplicial_holonomy.chains import enumerate_maximal
from simplicial_holonomy.dpalg import dp_mul, random_poly
from simplicial_holonomy.holonomy import exponential_check
from simplicial_holonomy.integrate import stokes_suite


def timed(label, fn, *args, **kw):
    t = time.perf_counter()
    fn(*args, **kw)
    print(f"{label:<32} {time.perf_counter() - t:8.3f} s")


def products(k=2000):
    rng = random.Random(0)
    pairs = [(random_poly(rng, 4, 5, 6, 9), random_poly(rng, 4, 5, 6, 9)) for _ in range(k)]
    for a, b in pairs:
        dp_mul(a, b)


def chains():
    for n in range(6):
        for r in range(6):
            list(enumerate_maximal(n, r))


if __name__ == "__main__":
    timed("dp_mul x 2000 (4 vars, deg 5)", products)
    timed("enumerate_maximal n,r <= 5", chains)
    timed("stokes suite 100 forms", stokes_suite, 100, 7)
    timed("holonomy exponential R=8", exponential_check, 8)
