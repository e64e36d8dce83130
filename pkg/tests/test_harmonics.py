import math
from fractions import Fraction

import pytest
from scipy.special import poch

from heisharm.group import DomainError
from heisharm.harmonics import (P200_DISPLAY_FACTOR, HarmonicIndex, basis_of_degree,
                                basis_up_to_degree, coeff_C, r_poly, spherical_harmonic)
from heisharm.poly import homogeneous_degree, parse_hpoly, sub_laplacian


@pytest.mark.parametrize("l, j, expected", [
    (0, 0, 1), (5, 0, 1), (0, 1, Fraction(1, 2)), (1, 2, Fraction(15, 8)),
])
def test_coeff_C_examples(l, j, expected):
    assert coeff_C(l, j) == expected


def test_coeff_C_matches_pochhammer():
    # oracle: C(l, j) = (l + 1/2)_j / j!
    for l in range(8):
        for j in range(8):
            assert float(coeff_C(l, j)) == pytest.approx(poch(l + 0.5, j) / math.factorial(j), rel=1e-13)


def test_r_poly_examples():
    assert r_poly(3, 0, 0) == 1
    assert r_poly(0, 0, 1) == parse_hpoly("t")
    for k in range(6):
        assert r_poly(k, 0, 1) == parse_hpoly(f"(1+{k})*t + i*{k}*z*zbar")


def test_spherical_harmonic_examples():
    P = spherical_harmonic(HarmonicIndex(0, 0, 2))
    assert P == parse_hpoly("2*t^2 - (z*zbar)^2")
    assert P200_DISPLAY_FACTOR == 1
    assert spherical_harmonic(HarmonicIndex(1, 0, 1)) == parse_hpoly("(2*t + i*z*zbar)*z")
    assert spherical_harmonic(HarmonicIndex(0, 0, 0)) == 1


def test_invalid_index():
    with pytest.raises(DomainError):
        HarmonicIndex(1, 1, 0)
    with pytest.raises(DomainError):
        HarmonicIndex(-1, 0, 0)


def test_basis_examples():
    assert basis_of_degree(0) == [HarmonicIndex(0, 0, 0)]
    assert set(basis_of_degree(1)) == {HarmonicIndex(1, 0, 0), HarmonicIndex(0, 1, 0)}
    assert set(basis_of_degree(4)) == {HarmonicIndex(4, 0, 0), HarmonicIndex(0, 4, 0),
                                       HarmonicIndex(2, 0, 1), HarmonicIndex(0, 2, 1),
                                       HarmonicIndex(0, 0, 2)}
    assert basis_of_degree(6) == basis_of_degree(6)


def test_basis_count_by_enumeration():
    for ell in range(20):
        brute = {(k, l, m) for k in range(ell + 1) for l in range(ell + 1) for m in range(ell + 1)
                 if k * l == 0 and 2 * m + k + l == ell}
        got = basis_of_degree(ell)
        assert len(got) == len(set(got)) == len(brute) == ell + 1
        assert {(i.k, i.l, i.m) for i in got} == brute


@pytest.mark.parametrize("idx", basis_up_to_degree(12), ids=str)
def test_basis_is_harmonic_and_homogeneous(idx):
    P = spherical_harmonic(idx)
    assert sub_laplacian(P).is_zero()
    assert homogeneous_degree(P) == idx.degree
    assert P.max_degree("t") == idx.m


@pytest.mark.parametrize("idx", basis_up_to_degree(10), ids=str)
def test_conjugation_symmetry(idx):
    assert spherical_harmonic(idx).conjugate() == spherical_harmonic(idx.conjugate())
