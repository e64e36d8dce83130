import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from heisharm.group import Point
from heisharm.scalars import PiScalar

small_fractions = st.fractions(min_value=-8, max_value=8, max_denominator=12)


@st.composite
def pi_scalars(draw, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        k = draw(st.integers(-2, 2))
        terms[k] = (draw(small_fractions), draw(small_fractions))
    return PiScalar(terms)


@st.composite
def exact_points(draw):
    return Point(draw(small_fractions), draw(small_fractions), draw(small_fractions))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_point(rng, scale=5, den=7):
    return Point(*(Fraction(int(rng.integers(-scale * den, scale * den + 1)), den)
                   for _ in range(3)))


def extended_enabled():
    return os.environ.get("HH_EXTENDED") == "1"


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(number, ok, text):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
