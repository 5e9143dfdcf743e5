import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from symcert.exact import SymPoly, monomial_basis

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

scalars = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def vectors(d):
    return st.lists(scalars, min_size=d, max_size=d)


def polys(d, N):
    return st.lists(scalars, min_size=len(monomial_basis(d, N)), max_size=len(monomial_basis(d, N))).map(
        lambda cs: SymPoly.from_coordinates(d, N, cs)
    )


def rand_scalar(rng, num=5, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_vec(rng, d):
    return [rand_scalar(rng) for _ in range(d)]


def rand_poly(rng, d, N, density=1.0):
    terms = {a: rand_scalar(rng) for a in monomial_basis(d, N) if rng.random() < density}
    return SymPoly(d, N, terms)


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    RESULTS = getattr(module, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        ok, elapsed, title, note = RESULTS[key]
        line = f"criterion {key:>4}: {'PASS' if ok else 'FAIL'}  ({elapsed:6.2f}s)  {title}"
        if note:
            line += f"  -- {note}"
        terminalreporter.write_line(line)
