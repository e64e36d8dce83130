import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate, special

from heisharm.group import Point
from heisharm.harmonics import HarmonicIndex, basis_up_to_degree, spherical_harmonic
from heisharm.mvp import (AVERAGE_VARS, CylindricalTerm, InvariantViolation, angular_average,
                          ball_average, beta_half, classify_index, classify_up_to_degree,
                          cylindrical_expand, harmonicity_defect, mean_at_origin, point_value,
                          radial_integral, vertical_integral)
from heisharm.poly import (TRANSLATED_VARS, HPoly, Poly, left_translate, parse_hpoly, parse_poly,
                           random_hpoly)
from heisharm.scalars import I, PI, PiScalar

from conftest import random_point

V6 = TRANSLATED_VARS


def avg_poly(text):
    return parse_poly(text, AVERAGE_VARS)


def _angular(poly6):
    """Angular integral of a polynomial in (z, zbar, t, z0, ...) as {(radial, outer): coeff}."""
    out = {}
    for term in angular_average(cylindrical_expand(poly6)):
        key = (term.radial, term.vertical, term.outer)
        out[key] = out.get(key, 0) + term.coeff
    return out


@pytest.mark.parametrize("k", range(1, 7))
def test_angular_residue_integrals(k):
    zq, zbq, z0 = (Poly.variable(V6, v) for v in ("z", "zbar", "z0"))
    base = (zq + z0) ** k
    # int (r e^{i theta} + z0)^k dtheta = 2 pi z0^k
    assert _angular(base) == {(0, 0, (k, 0, 0)): PI.scale(2)}
    # r * int cos(theta) (...)^k = k pi r^2 z0^(k-1); r cos = (z + zbar)/2
    got = _angular(base * (zq + zbq) * Fraction(1, 2))
    assert got == {(2, 0, (k - 1, 0, 0)): PI.scale(k)}
    # r * int sin(theta) (...)^k = i k pi r^2 z0^(k-1); r sin = (z - zbar)/(2i)
    got = _angular(base * (zq - zbq) * PiScalar.gaussian(0, Fraction(-1, 2)))
    assert got == {(2, 0, (k - 1, 0, 0)): PI.scale(k) * I}


def test_angular_residue_integrals_numerically():
    # oracle: periodic trapezoid rule is exact for trigonometric polynomials
    k, r, z0 = 4, 0.7, 0.3 - 0.8j
    th = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    f = (r * np.exp(1j * th) + z0) ** k
    h = 2 * np.pi / th.size
    assert np.sum(f) * h == pytest.approx(2 * np.pi * z0 ** k)
    assert np.sum(np.cos(th) * f) * h == pytest.approx(k * np.pi * r * z0 ** (k - 1))
    assert np.sum(np.sin(th) * f) * h == pytest.approx(1j * k * np.pi * r * z0 ** (k - 1))


def test_nonzero_frequency_vanishes():
    assert angular_average([CylindricalTerm((0, 0, 0), 1, 1, 0, PiScalar.coerce(1))]) == []


def test_vertical_integral_examples():
    one = PiScalar.coerce(1)
    (t0,) = vertical_integral([CylindricalTerm((0, 0, 0), 0, 0, 0, one)])
    assert (t0.coeff, t0.half_power) == (2, 1)
    assert vertical_integral([CylindricalTerm((0, 0, 0), 0, 0, 1, one)]) == []
    (t2,) = vertical_integral([CylindricalTerm((0, 0, 0), 0, 0, 2, one)])
    assert (t2.coeff, t2.half_power) == (Fraction(2, 3), 3)


@pytest.mark.parametrize("a, c, coeff, rpow", [
    (1, 1, PI.scale(Fraction(1, 8)), 4),
    (5, 1, PI.scale(Fraction(1, 32)), 8),
    (3, 1, PiScalar.coerce(Fraction(1, 6)), 6),
])
def test_radial_integral_examples(a, c, coeff, rpow):
    assert radial_integral(a, c) == (coeff, rpow)


@pytest.mark.parametrize("a", [1, 3, 5, 7, 9, 11])
@pytest.mark.parametrize("c", [0, 1, 3, 5, 7])
def test_radial_integral_against_quadrature(a, c):
    R = 1.3
    coeff, rpow = radial_integral(a, c)
    exact = complex(coeff).real * R ** rpow
    oracle, _ = integrate.quad(lambda r: r ** a * (R ** 4 - r ** 4) ** (c / 2), 0, R,
                               epsabs=0, epsrel=1e-13, limit=200)
    assert exact == pytest.approx(oracle, rel=1e-10)


def test_beta_against_scipy():
    for tx in range(1, 12):
        for ty in range(1, 12):
            b = beta_half(tx, ty) if (tx % 2 + ty % 2) != 1 else None
            if b is not None:
                assert complex(b).real == pytest.approx(special.beta(tx / 2, ty / 2), rel=1e-13)


def test_radial_parity_invariant():
    with pytest.raises(InvariantViolation):
        radial_integral(2, 1)


def test_ball_average_examples():
    assert ball_average(HPoly({(0, 0, 0): 1})) == avg_poly("1")
    P = parse_hpoly("2*t^2 - (z*zbar)^2")
    assert ball_average(P) == point_value(P) + avg_poly("R^4/4")
    at0 = ball_average(parse_hpoly("z*zbar")).specialize({"z0": 0, "zbar0": 0, "t0": 0})
    assert at0 == parse_poly("4*R^2/(3*pi)", ("R",))


def test_ball_average_of_t_squared():
    # hand computation: 2 pi * (2/3) * int r (R^4-r^4)^{3/2} dr / (pi^2 R^4 / 2)
    avg = ball_average(parse_hpoly("t^2"))
    assert avg == avg_poly("t0^2 + 8*z0*zbar0*R^2/(3*pi) + R^4/4")
    assert harmonicity_defect(parse_hpoly("t^2")).defect.specialize(
        {"z0": 0, "zbar0": 0, "t0": 0}) == parse_poly("R^4/4", ("R",))


@pytest.mark.parametrize("k", range(7))
def test_observation_family_is_strongly_harmonic(k):
    for idx in (HarmonicIndex(k, 0, 1), HarmonicIndex(0, k, 1)):
        report = harmonicity_defect(spherical_harmonic(idx))
        assert report.is_strongly_harmonic and report.defect.is_zero()
    # the same polynomial written out by hand
    P = parse_hpoly(f"((1+{k})*t + i*{k}*z*zbar)*z^{k}")
    assert harmonicity_defect(P).is_strongly_harmonic


def test_p200_defect():
    report = harmonicity_defect(spherical_harmonic(HarmonicIndex(0, 0, 2)))
    assert report.defect == avg_poly("R^4/4")
    assert not report.is_strongly_harmonic


def test_zero_polynomial():
    assert harmonicity_defect(HPoly()).is_strongly_harmonic


def test_linearity(rng):
    for _ in range(5):
        P, Q = random_hpoly(rng, 5), random_hpoly(rng, 5)
        a, b = PiScalar.gaussian(Fraction(2, 3), -1), PiScalar.gaussian(-3, Fraction(1, 5), 1)
        assert ball_average(P * a + Q * b) == ball_average(P) * a + ball_average(Q) * b


def test_left_invariance(rng):
    for _ in range(5):
        P = random_hpoly(rng, 5)
        p = random_point(rng, scale=2, den=3)
        lhs = ball_average(P).specialize(
            {"z0": PiScalar.gaussian(p.x, p.y), "zbar0": PiScalar.gaussian(p.x, -p.y), "t0": p.t})
        rhs = ball_average(left_translate(P, p)).specialize({"z0": 0, "zbar0": 0, "t0": 0})
        assert lhs == rhs


@pytest.mark.parametrize("idx", basis_up_to_degree(8), ids=str)
def test_homogeneity_at_origin(idx):
    mean = mean_at_origin(idx)
    assert len(mean) <= 1
    if mean:
        ((e,),) = mean.terms.keys()
        assert e == idx.degree


def test_mean_at_origin():
    assert mean_at_origin(HarmonicIndex(0, 0, 0)) == 1
    for k in range(1, 6):
        for m in range(4):
            assert mean_at_origin(HarmonicIndex(k, 0, m)).is_zero()
    assert mean_at_origin(HarmonicIndex(0, 0, 2)) == parse_poly("R^4/4", ("R",))


def test_conjugation_of_defect(rng):
    for _ in range(4):
        P = random_hpoly(rng, 5)
        assert harmonicity_defect(P.conjugate()).defect == harmonicity_defect(P).defect.conjugate()


def test_average_is_pi_laurent_with_pi_inverse():
    avg = ball_average(parse_hpoly("z*zbar"))
    assert any(-1 in c.terms for c in avg.terms.values())


def test_classify_small_degrees():
    rows = classify_up_to_degree(2, parallel=1)
    assert [(r.k, r.l, r.m) for r in rows] == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                                               (2, 0, 0), (0, 2, 0)]
    assert all(r.strongly_harmonic for r in rows)
    rows = classify_up_to_degree(4, parallel=1)
    assert {(r.k, r.l, r.m) for r in rows if not r.strongly_harmonic} == {(0, 0, 2)}


def test_classify_degree_12_and_laplace_beltrami_support():
    rows = classify_up_to_degree(12, parallel=1)
    assert len(rows) == sum(ell + 1 for ell in range(13))
    for r in rows:
        assert r.strongly_harmonic == (r.m <= 1)
        # conjecture support only: strongly harmonic rows also solve the Laplace-Beltrami equation
        assert r.laplace_beltrami_zero == r.strongly_harmonic


def test_parallel_matches_serial():
    assert classify_up_to_degree(6, parallel=2) == classify_up_to_degree(6, parallel=1)


def test_classify_row_leading_term():
    row = classify_index(HarmonicIndex(0, 0, 2))
    assert row.defect_leading_term == "R^4/4"
