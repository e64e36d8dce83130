import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisharm.group import (FOLLAND_KAPLAN, DomainError, GaugeKind, Point, RealPoint,
                            ball_volume, dilate, distance, gauge, gauge_array, inverse, multiply)

from conftest import exact_points

O = Point(0, 0, 0)


def P(x, y, t):
    return Point(Fraction(x), Fraction(y), Fraction(t))


@pytest.mark.parametrize("p, q, expected", [
    (P(0, 0, 0), P(1, 2, 3), P(1, 2, 3)),
    (P(1, 0, 0), P(0, 1, 0), P(1, 1, -2)),
    (P(1, 0, 0), P(-1, 0, 0), P(0, 0, 0)),
])
def test_multiply_examples(p, q, expected):
    assert multiply(p, q) == expected


def test_inverse_examples():
    assert inverse(O) == O
    assert inverse(P(1, 2, 3)) == P(-1, -2, -3)


@given(exact_points(), exact_points(), exact_points())
@settings(max_examples=300)
def test_group_axioms(p, q, r):
    assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))
    assert multiply(p, inverse(p)) == O
    assert multiply(inverse(p), p) == O
    assert multiply(O, p) == p == multiply(p, O)


def test_dilate_examples():
    assert dilate(P(1, 1, 1), 1) == P(1, 1, 1)
    assert dilate(P(1, 0, 1), 2) == P(2, 0, 4)
    for bad in (0, -1):
        with pytest.raises(DomainError):
            dilate(P(1, 0, 0), bad)


@given(exact_points(), exact_points(), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_dilation_is_automorphism(p, q, lam):
    assert dilate(multiply(p, q), lam) == multiply(dilate(p, lam), dilate(q, lam))


def test_gauge_examples():
    assert gauge(RealPoint(0, 0, 0)) == 0
    assert gauge(RealPoint(1, 0, 0)) == 1
    assert gauge(RealPoint(0, 0, 1)) == 1
    assert gauge(RealPoint(1, 0, 1)) == pytest.approx(2 ** 0.25, rel=1e-15)
    assert distance(RealPoint(0, 0, 0), RealPoint(1, 0, 0)) == 1


KINDS = [FOLLAND_KAPLAN, GaugeKind.canonical(1), GaugeKind.canonical(4), GaugeKind.canonical(Fraction(5, 2))]


@pytest.mark.parametrize("kind", KINDS)
def test_gauge_homogeneity_and_symmetry(kind, rng):
    for _ in range(500):
        p = RealPoint(*rng.uniform(-3, 3, 3))
        lam = float(rng.uniform(0.05, 20))
        assert gauge(dilate(p, lam), kind) == pytest.approx(lam * gauge(p, kind), rel=1e-13)
        assert gauge(inverse(p), kind) == gauge(p, kind)


def test_gauge_kind_validation():
    with pytest.raises(DomainError):
        GaugeKind.canonical(Fraction(1, 2))
    with pytest.raises(DomainError):
        GaugeKind("Nope")


def test_distance_symmetric_and_zero_on_diagonal(rng):
    for _ in range(200):
        p, q = RealPoint(*rng.normal(size=3)), RealPoint(*rng.normal(size=3))
        assert distance(p, p) == 0
        assert distance(p, q) == pytest.approx(distance(q, p), rel=1e-14)


def _dist_arrays(a, b, kind):
    # d(a, b) = N(a^{-1} b) vectorised over rows of (x, y, t)
    x = b[:, 0] - a[:, 0]
    y = b[:, 1] - a[:, 1]
    t = b[:, 2] - a[:, 2] + 2 * (b[:, 0] * (-a[:, 1]) - (-a[:, 0]) * b[:, 1])
    return gauge_array(x, y, t, kind)


def fk_triangle_violation(rng, n):
    p0, p1, p2 = (rng.uniform(-2, 2, size=(n, 3)) for _ in range(3))
    lhs = _dist_arrays(p1, p2, FOLLAND_KAPLAN)
    rhs = _dist_arrays(p1, p0, FOLLAND_KAPLAN) + _dist_arrays(p0, p2, FOLLAND_KAPLAN)
    return float(np.max(lhs - rhs - 1e-12 * rhs))


def test_fk_triangle_inequality(rng):
    assert fk_triangle_violation(rng, 100_000) <= 0


def test_canonical_quasi_triangle_constant_bounded(rng):
    n = 20_000
    p0, p1, p2 = (rng.uniform(-2, 2, size=(n, 3)) for _ in range(3))
    kind = GaugeKind.canonical(4)
    ratio = _dist_arrays(p1, p2, kind) / (_dist_arrays(p1, p0, kind) + _dist_arrays(p0, p2, kind))
    assert np.isfinite(ratio).all()
    assert ratio.max() < 4


def test_gauges_are_equivalent(rng):
    pts = rng.normal(size=(5000, 3))
    fk = gauge_array(*pts.T)
    for kind in KINDS[1:]:
        ratio = gauge_array(*pts.T, kind=kind) / fk
        assert 0.1 < ratio.min() and ratio.max() < 10


def test_ball_volume():
    assert ball_volume(1) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)
    assert ball_volume(2) == pytest.approx(16 * ball_volume(1), rel=1e-15)
    assert ball_volume(0.5) == pytest.approx(ball_volume(1) / 16, rel=1e-15)
    with pytest.raises(DomainError):
        ball_volume(0)


def test_realpoint_rejects_nonfinite():
    with pytest.raises(DomainError):
        RealPoint(float("nan"), 0, 0)
