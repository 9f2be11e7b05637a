"""One test per acceptance criterion, each printing a PASS/FAIL line.

The lines also appear in the terminal summary of any pytest run that
includes this file, and `python tests/test_acceptance.py` prints them alone.
"""

import pytest

from simplicial_holonomy.cli import SUITES, run_suite

SEED = 7
LINES = {}


def criterion_line(index, seed=SEED):
    res = run_suite(index, seed)
    status, rest = res.line().split(" ", 1)
    return f"{status} {index + 1}. {rest}"


@pytest.mark.parametrize("index", range(len(SUITES)), ids=[s[0].replace(" ", "_") for s in SUITES])
def test_criterion(index):
    line = criterion_line(index)
    LINES[index] = line
    print(line)
    assert line.startswith("PASS"), line


def test_every_criterion_has_a_suite():
    assert len(SUITES) == 10


if __name__ == "__main__":
    for i in range(len(SUITES)):
        print(criterion_line(i), flush=True)
