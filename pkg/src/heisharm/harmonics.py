"""Spherical-harmonic basis of L-harmonic polynomials on the first Heisenberg group.

``P^m_{k,l}(z, t) = r^m_{k,l}(t + i|z|^2, t - i|z|^2) z^k zbar^l`` with

    r^m_{k,l}(w, wbar) = m! * sum_j C(l, j) C(k, m - j) w^(m-j) wbar^j

On H^1 only ``k = 0`` or ``l = 0`` give harmonic ``z^k zbar^l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List

from .group import DomainError
from .poly import HPoly, t
from .scalars import I


@dataclass(frozen=True, order=True)
class HarmonicIndex:
    k: int
    l: int
    m: int

    def __post_init__(self):
        if min(self.k, self.l, self.m) < 0:
            raise DomainError(f"indices must be nonnegative, got {self}")
        if self.k * self.l != 0:
            raise DomainError(
                f"z^{self.k} zbar^{self.l} is not L-harmonic on H^1; need k == 0 or l == 0")

    @property
    def degree(self) -> int:
        return 2 * self.m + self.k + self.l

    def conjugate(self) -> "HarmonicIndex":
        return HarmonicIndex(self.l, self.k, self.m)

    def __str__(self) -> str:
        return f"({self.k},{self.l},{self.m})"


def coeff_C(l: int, j: int) -> Fraction:
    if j == 0:
        return Fraction(1)
    prod = Fraction(1)
    for i in range(j):
        prod *= Fraction(1, 2) + l + i
    return prod / math.factorial(j)


def _w() -> HPoly:
    return t() + HPoly.monomial(1, 1, 0) * I


def _wbar() -> HPoly:
    return t() - HPoly.monomial(1, 1, 0) * I


@lru_cache(maxsize=None)
def r_poly(k: int, l: int, m: int) -> HPoly:
    """``r^m_{k,l}`` evaluated at ``w = t + i|z|^2``, returned as an HPoly."""
    w, wb = _w(), _wbar()
    total = HPoly()
    for j in range(m + 1):
        c = coeff_C(l, j) * coeff_C(k, m - j)
        total = total + (w ** (m - j)) * (wb ** j) * c
    return total * math.factorial(m)


@lru_cache(maxsize=None)
def _spherical_harmonic(k: int, l: int, m: int) -> HPoly:
    return r_poly(k, l, m) * HPoly.monomial(k, l, 0)


def spherical_harmonic(idx: HarmonicIndex) -> HPoly:
    return _spherical_harmonic(idx.k, idx.l, idx.m)


def basis_of_degree(ell: int) -> List[HarmonicIndex]:
    """All basis indices of homogeneous degree ``ell``, holomorphic side first."""
    if ell < 0:
        raise DomainError(f"degree must be nonnegative, got {ell}")
    out = []
    for m in range(ell // 2, -1, -1):
        k = ell - 2 * m
        out.append(HarmonicIndex(k, 0, m))
        if k:
            out.append(HarmonicIndex(0, k, m))
    return out


def basis_up_to_degree(D: int) -> List[HarmonicIndex]:
    return [idx for ell in range(D + 1) for idx in basis_of_degree(ell)]


#: spherical_harmonic((0,0,2)) divided by 2t^2 - |z|^4; the formula needs no rescaling
P200_DISPLAY_FACTOR = Fraction(1)
