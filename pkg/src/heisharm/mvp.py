"""Exact averages of polynomials over Folland-Kaplan (Koranyi) balls.

The average of ``P`` over ``B(p, R)`` equals the average of ``q -> P(p q)``
over ``B(0, R) = {r^4 + t^2 <= R^4}``. In cylindrical coordinates
``q = (r e^{i theta}, t)`` each monomial ``z^a zbar^b t^n`` of the translate
becomes ``r^(a+b) e^{i(a-b) theta} t^n`` and the integral factors:

* angle: only the zero frequency survives, contributing ``2 pi``;
* height: ``t^n`` over ``|t| <= sqrt(R^4 - r^4)`` gives ``2 (R^4-r^4)^((n+1)/2) / (n+1)``
  for even ``n`` and 0 otherwise;
* radius: ``int_0^R r^a (R^4 - r^4)^(c/2) dr = R^(a+1+2c)/4 * B((a+1)/4, c/2 + 1)``.

Everything stays in the pi-Laurent ring, so the result is exact.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .harmonics import HarmonicIndex, basis_up_to_degree, spherical_harmonic
from .poly import CENTER_VARS, HPoly, Poly, laplace_beltrami, left_translate
from .scalars import ZERO, PiScalar

AVERAGE_VARS = CENTER_VARS + ("R",)

_BALL_VOLUME_INV = PiScalar.gaussian(2, 0, pi_power=-2)  # 1 / (pi^2/2), times R^-4


class InvariantViolation(AssertionError):
    """An internal parity/shape invariant of the integration pipeline failed."""


@dataclass(frozen=True)
class CylindricalTerm:
    """``coeff * outer(z0, zbar0, t0) * e^{i phase theta} r^radial t^vertical (R^4-r^4)^(half_power/2)``."""

    outer: Tuple[int, int, int]
    phase: int
    radial: int
    vertical: int
    coeff: PiScalar
    half_power: int = 0


def cylindrical_expand(translated: Poly) -> List[CylindricalTerm]:
    """Split a polynomial over ``(z, zbar, t, z0, zbar0, t0)`` into cylindrical terms."""
    out = []
    for (a, b, n, *outer), c in translated.terms.items():
        out.append(CylindricalTerm(tuple(outer), a - b, a + b, n, c))
    return out


def angular_average(terms: Sequence[CylindricalTerm]) -> List[CylindricalTerm]:
    """Integrate over the angle: keep the zero Fourier mode, multiply by ``2 pi``."""
    return [replace(term, coeff=term.coeff.shift_pi(1).scale(2))
            for term in terms if term.phase == 0]


def vertical_integral(terms: Sequence[CylindricalTerm]) -> List[CylindricalTerm]:
    """Integrate ``t^n`` over ``[-sqrt(R^4-r^4), sqrt(R^4-r^4)]``."""
    out = []
    for term in terms:
        n = term.vertical
        if n < 0:
            raise InvariantViolation(f"negative vertical exponent {n}")
        if n % 2:
            continue
        out.append(replace(term, vertical=0, half_power=term.half_power + n + 1,
                           coeff=term.coeff.scale(Fraction(2, n + 1))))
    return out


def gamma_half(two_x: int) -> Tuple[Fraction, int]:
    """``Gamma(two_x / 2)`` as ``(q, s)`` meaning ``q * sqrt(pi)^s`` with ``s`` in {0, 1}."""
    if two_x <= 0:
        raise ValueError(f"Gamma argument must be positive, got {two_x}/2")
    if two_x % 2 == 0:
        return Fraction(math.factorial(two_x // 2 - 1)), 0
    n = (two_x - 1) // 2
    # Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1


def beta_half(two_x: int, two_y: int) -> PiScalar:
    """``B(two_x/2, two_y/2)`` exactly; the sqrt(pi) powers always pair up here."""
    gx, sx = gamma_half(two_x)
    gy, sy = gamma_half(two_y)
    gxy, sxy = gamma_half(two_x + two_y)
    s = sx + sy - sxy
    if s % 2:
        raise InvariantViolation(f"Beta({two_x}/2, {two_y}/2) is not in Q[pi, 1/pi]")
    return PiScalar.gaussian(gx * gy / gxy, 0, pi_power=s // 2)


def radial_integral(a: int, c: int) -> Tuple[PiScalar, int]:
    """``int_0^R r^a (R^4-r^4)^(c/2) dr`` as ``(coefficient, power of R)``.

    ``a`` includes the Jacobian factor and must be odd.
    """
    if a < 1 or a % 2 == 0:
        raise InvariantViolation(f"radial exponent must be odd and positive, got {a}")
    if c < 0:
        raise InvariantViolation(f"negative half power {c}")
    # (a+1)/4 and c/2 + 1 in halves
    coeff = beta_half((a + 1) // 2, c + 2).scale(Fraction(1, 4))
    return coeff, a + 1 + 2 * c


def _integrate_terms(terms: Sequence[CylindricalTerm]) -> Poly:
    acc: Dict[Tuple[int, ...], PiScalar] = {}
    for term in vertical_integral(angular_average(terms)):
        coeff, r_pow = radial_integral(term.radial + 1, term.half_power)
        r_pow -= 4
        if r_pow < 0:
            raise InvariantViolation(f"negative power of R after normalisation: {term}")
        key = term.outer + (r_pow,)
        value = term.coeff * coeff * _BALL_VOLUME_INV
        acc[key] = acc[key] + value if key in acc else value
    return Poly(AVERAGE_VARS, acc)


def ball_average(P: Poly) -> Poly:
    """Exact mean of ``P`` over ``B((z0, t0), R)`` as a polynomial in ``(z0, zbar0, t0, R)``."""
    translated = left_translate(P, "symbolic")
    return _integrate_terms(cylindrical_expand(translated))


def point_value(P: Poly) -> Poly:
    """``P(z0, zbar0, t0)`` over the average variables."""
    return HPoly.from_poly(P).rename(CENTER_VARS).embed(AVERAGE_VARS)


@dataclass
class DefectReport:
    label: str
    defect: Poly
    is_strongly_harmonic: bool = field(init=False)

    def __post_init__(self):
        self.is_strongly_harmonic = self.defect.is_zero()

    def leading_term(self) -> str:
        return str(self.defect.leading_term())


def harmonicity_defect(P: Poly, label: str = "") -> DefectReport:
    """Ball average minus point value; identically zero iff ``P`` is strongly harmonic."""
    if P.is_zero():
        return DefectReport(label or "0", Poly(AVERAGE_VARS))
    defect = ball_average(P) - point_value(P)
    return DefectReport(label or str(P), defect)


def mean_at_origin(idx: HarmonicIndex) -> Poly:
    """Mean of ``P^m_{k,l}`` over ``B(0, R)`` as a polynomial in ``R``."""
    avg = ball_average(spherical_harmonic(idx))
    return avg.specialize({"z0": 0, "zbar0": 0, "t0": 0})


@dataclass(frozen=True)
class ClassificationRow:
    k: int
    l: int
    m: int
    degree: int
    strongly_harmonic: bool
    defect_leading_term: str
    laplace_beltrami_zero: bool

    @property
    def index(self) -> HarmonicIndex:
        return HarmonicIndex(self.k, self.l, self.m)


CSV_COLUMNS = ("k", "l", "m", "degree", "strongly_harmonic", "defect_leading_term")


def classify_index(idx: HarmonicIndex) -> ClassificationRow:
    P = spherical_harmonic(idx)
    report = harmonicity_defect(P, str(idx))
    return ClassificationRow(
        k=idx.k, l=idx.l, m=idx.m, degree=idx.degree,
        strongly_harmonic=report.is_strongly_harmonic,
        defect_leading_term=report.leading_term(),
        laplace_beltrami_zero=laplace_beltrami(P).is_zero(),
    )


def default_parallelism() -> int:
    env = os.environ.get("HH_PARALLEL")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def classify_up_to_degree(D: int, parallel: int | None = None) -> List[ClassificationRow]:
    """Classify every basis element of degree ``<= D``; rows in basis order."""
    if D < 0:
        raise ValueError(f"max degree must be nonnegative, got {D}")
    indices = basis_up_to_degree(D)
    workers = parallel if parallel is not None else default_parallelism()
    if workers <= 1 or len(indices) < 2:
        return [classify_index(idx) for idx in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(classify_index, indices))
