"""Exact scalar ring: Laurent polynomials in a formal pi over the Gaussian rationals.

A :class:`PiScalar` is a finite sum ``sum_k q_k * pi**k`` with ``k`` an integer
(possibly negative) and ``q_k = a + b*i`` where ``a, b`` are arbitrary-precision
rationals. pi is treated as a transcendental symbol, so equality is structural.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, Tuple, Union

Gauss = Tuple[Fraction, Fraction]
ScalarLike = Union["PiScalar", int, Fraction, complex]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite float {value!r} cannot be made exact")
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class PiScalar:
    """Element of Q(i)[pi, 1/pi]. Immutable and hashable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[int, Gauss] | None = None):
        clean = {}
        if terms:
            for k, (re, im) in terms.items():
                if re or im:
                    clean[int(k)] = (_to_fraction(re), _to_fraction(im))
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, Gauss]) -> "PiScalar":
        # trusted constructor: terms already normalised (no zeros, Fractions)
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def coerce(cls, value: ScalarLike) -> "PiScalar":
        if isinstance(value, PiScalar):
            return value
        if isinstance(value, complex):
            return cls({0: (_to_fraction(value.real), _to_fraction(value.imag))})
        return cls({0: (_to_fraction(value), _ZERO)})

    @classmethod
    def gaussian(cls, re=0, im=0, pi_power: int = 0) -> "PiScalar":
        return cls({pi_power: (_to_fraction(re), _to_fraction(im))})

    @classmethod
    def pi(cls, power: int = 1) -> "PiScalar":
        return cls._raw({power: (_ONE, _ZERO)})

    @classmethod
    def imag_unit(cls) -> "PiScalar":
        return cls._raw({0: (_ZERO, _ONE)})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> Dict[int, Gauss]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Gauss]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_rational(self) -> bool:
        """True when the value is a plain rational (pi-free, real)."""
        if not self._terms:
            return True
        return set(self._terms) == {0} and self._terms[0][1] == 0

    def is_pi_free(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def is_real(self) -> bool:
        return all(im == 0 for _, im in self._terms.values())

    def gaussian_part(self, pi_power: int = 0) -> Gauss:
        return self._terms.get(pi_power, (_ZERO, _ZERO))

    def conjugate(self) -> "PiScalar":
        return PiScalar._raw({k: (re, -im) for k, (re, im) in self._terms.items()})

    def real_part(self) -> "PiScalar":
        return PiScalar({k: (re, _ZERO) for k, (re, _) in self._terms.items()})

    def imag_part(self) -> "PiScalar":
        return PiScalar({k: (im, _ZERO) for k, (_, im) in self._terms.items()})

    def __complex__(self) -> complex:
        total = 0j
        for k, (re, im) in self._terms.items():
            total += complex(float(re), float(im)) * math.pi ** k
        return total

    def __float__(self) -> float:
        if not self.is_real():
            raise TypeError("PiScalar has a nonzero imaginary part")
        return complex(self).real

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: ScalarLike) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, (re, im) in other._terms.items():
            if k in out:
                r0, i0 = out[k]
                r, i = r0 + re, i0 + im
                if r or i:
                    out[k] = (r, i)
                else:
                    del out[k]
            else:
                out[k] = (re, im)
        return PiScalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PiScalar":
        return PiScalar._raw({k: (-re, -im) for k, (re, im) in self._terms.items()})

    def __pos__(self) -> "PiScalar":
        return self

    def __sub__(self, other: ScalarLike) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "PiScalar":
        return PiScalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[int, Gauss] = {}
        for k1, (a1, b1) in self._terms.items():
            for k2, (a2, b2) in other._terms.items():
                re = a1 * a2 - b1 * b2
                im = a1 * b2 + b1 * a2
                k = k1 + k2
                if k in out:
                    r0, i0 = out[k]
                    re, im = r0 + re, i0 + im
                out[k] = (re, im)
        return PiScalar._raw({k: v for k, v in out.items() if v[0] or v[1]})

    __rmul__ = __mul__

    def scale(self, q) -> "PiScalar":
        """Multiply by a rational."""
        q = _to_fraction(q)
        if not q:
            return ZERO
        return PiScalar._raw({k: (re * q, im * q) for k, (re, im) in self._terms.items()})

    def shift_pi(self, power: int) -> "PiScalar":
        """Multiply by ``pi**power``."""
        return PiScalar._raw({k + power: v for k, v in self._terms.items()})

    def inverse(self) -> "PiScalar":
        """Inverse of a single-term element ``q * pi**k``; other elements are not units."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not invertible in the pi-Laurent ring")
        (k, (a, b)), = self._terms.items()
        norm = a * a + b * b
        return PiScalar._raw({-k: (a / norm, -b / norm)})

    def __truediv__(self, other: ScalarLike) -> "PiScalar":
        try:
            other = PiScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> "PiScalar":
        return PiScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PiScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, PiScalar):
            return self._terms == other._terms
        try:
            return self._terms == PiScalar.coerce(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- printing -------------------------------------------------------
    def __repr__(self) -> str:
        return f"PiScalar({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (re, im) in self.items():
            parts.append(_format_term(re, im, k))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


def _format_gauss(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{im}*i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{mag}*i"
    return f"({re} {sign} {imag})"


def _format_term(re: Fraction, im: Fraction, k: int) -> str:
    if k == 0:
        return _format_gauss(re, im)
    pi_txt = "pi" if abs(k) == 1 else f"pi^{abs(k)}"
    if im == 0:
        num, den = re.numerator, re.denominator
        sign = "-" if num < 0 else ""
        num = abs(num)
        top = [] if num == 1 else [str(num)]
        bottom = [] if den == 1 else [str(den)]
        (top if k > 0 else bottom).append(pi_txt)
        head = "*".join(top) if top else "1"
        if not bottom:
            return sign + head
        tail = bottom[0] if len(bottom) == 1 else "(" + "*".join(bottom) + ")"
        return f"{sign}{head}/{tail}"
    g = _format_gauss(re, im)
    return f"{g}*{pi_txt}" if k > 0 else f"{g}/{pi_txt}"


ZERO = PiScalar._raw({})
ONE = PiScalar._raw({0: (_ONE, _ZERO)})
I = PiScalar._raw({0: (_ZERO, _ONE)})
PI = PiScalar._raw({1: (_ONE, _ZERO)})
