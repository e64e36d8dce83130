"""The first Heisenberg group in (z, t) coordinates.

Points are written ``(x, y, t)`` with ``z = x + iy`` and the product

    (z1, t1) * (z2, t2) = (z1 + z2, t1 + t2 + 2 Im(z1 * conj(z2)))

so that the left-invariant horizontal fields are ``X = d/dx + 2y d/dt`` and
``Y = d/dy - 2x d/dt`` with ``[X, Y] = -4 T``. The homogeneous dimension is 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

HOMOGENEOUS_DIMENSION = 4


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class Point:
    """Group element with exact rational coordinates."""

    x: Fraction
    y: Fraction
    t: Fraction

    def __post_init__(self):
        for name in ("x", "y", "t"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, Fraction(value))

    @classmethod
    def identity(cls) -> "Point":
        return cls(Fraction(0), Fraction(0), Fraction(0))

    def to_real(self) -> "RealPoint":
        return RealPoint(float(self.x), float(self.y), float(self.t))

    def __iter__(self):
        return iter((self.x, self.y, self.t))


@dataclass(frozen=True)
class RealPoint:
    """Group element with machine-real coordinates."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        for name in ("x", "y", "t"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"coordinate {name}={value!r} is not finite")
            object.__setattr__(self, name, value)

    @classmethod
    def identity(cls) -> "RealPoint":
        return cls(0.0, 0.0, 0.0)

    def __iter__(self):
        return iter((self.x, self.y, self.t))


AnyPoint = Union[Point, RealPoint]


@dataclass(frozen=True)
class GaugeKind:
    """Which homogeneous norm to use.

    ``FollandKaplan`` is ``(|z|^4 + t^2)^(1/4)``; ``CanonicalAlpha`` is
    ``(|z|^alpha + |t|^(alpha/2))^(1/alpha)`` for a rational ``alpha >= 1``.
    """

    tag: str = "FollandKaplan"
    alpha: Fraction | None = None

    def __post_init__(self):
        if self.tag == "FollandKaplan":
            if self.alpha is not None:
                raise DomainError("FollandKaplan gauge takes no alpha")
        elif self.tag == "CanonicalAlpha":
            if self.alpha is None:
                raise DomainError("CanonicalAlpha gauge requires alpha")
            alpha = Fraction(self.alpha)
            if alpha < 1:
                raise DomainError(f"alpha must be >= 1, got {alpha}")
            object.__setattr__(self, "alpha", alpha)
        else:
            raise DomainError(f"unknown gauge tag {self.tag!r}")

    @classmethod
    def canonical(cls, alpha) -> "GaugeKind":
        return cls("CanonicalAlpha", Fraction(alpha))


FOLLAND_KAPLAN = GaugeKind()


def _same_kind(p: AnyPoint, q: AnyPoint):
    if isinstance(p, Point) and isinstance(q, Point):
        return Point
    return RealPoint


def multiply(p: AnyPoint, q: AnyPoint) -> AnyPoint:
    cls = _same_kind(p, q)
    if cls is RealPoint:
        p = p.to_real() if isinstance(p, Point) else p
        q = q.to_real() if isinstance(q, Point) else q
    return cls(p.x + q.x, p.y + q.y, p.t + q.t + 2 * (q.x * p.y - p.x * q.y))


def inverse(p: AnyPoint) -> AnyPoint:
    return type(p)(-p.x, -p.y, -p.t)


def dilate(p: AnyPoint, lam) -> AnyPoint:
    if lam <= 0:
        raise DomainError(f"dilation factor must be positive, got {lam}")
    if isinstance(p, Point):
        lam = Fraction(lam)
    else:
        lam = float(lam)
    return type(p)(lam * p.x, lam * p.y, lam * lam * p.t)


def gauge(p: AnyPoint, kind: GaugeKind = FOLLAND_KAPLAN) -> float:
    x, y, t = float(p.x), float(p.y), float(p.t)
    rho2 = x * x + y * y
    if kind.tag == "FollandKaplan":
        return math.sqrt(math.sqrt(rho2 * rho2 + t * t))
    alpha = float(kind.alpha)
    return (rho2 ** (alpha / 2) + abs(t) ** (alpha / 2)) ** (1.0 / alpha)


def gauge_array(x, y, t, kind: GaugeKind = FOLLAND_KAPLAN) -> np.ndarray:
    """Vectorised :func:`gauge` over coordinate arrays."""
    x, y, t = (np.asarray(a, dtype=float) for a in (x, y, t))
    rho2 = x * x + y * y
    if kind.tag == "FollandKaplan":
        return np.sqrt(np.sqrt(rho2 * rho2 + t * t))
    alpha = float(kind.alpha)
    return (rho2 ** (alpha / 2) + np.abs(t) ** (alpha / 2)) ** (1.0 / alpha)


def distance(p: AnyPoint, q: AnyPoint, kind: GaugeKind = FOLLAND_KAPLAN) -> float:
    return gauge(multiply(inverse(p), q), kind)


def ball_volume(R: float) -> float:
    """Lebesgue volume of a Folland-Kaplan ball of radius ``R``: pi^2 R^4 / 2."""
    if not R > 0:
        raise DomainError(f"radius must be positive, got {R}")
    return math.pi ** 2 * float(R) ** 4 / 2
