"""Sparse multivariate polynomials with :class:`PiScalar` coefficients.

:class:`Poly` is a polynomial over an ordered tuple of named variables.
:class:`HPoly` fixes the variables to ``(z, zbar, t)``, the natural coordinates
for polynomials on the Heisenberg group; it carries the left-invariant vector
fields, the sub-Laplacian and left translation.

Variables named ``v``, ``vbar`` (or ``v0``, ``vbar0``) are complex conjugates of each other; all
other variables are real.
"""
from __future__ import annotations

import re

import ast
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from .group import AnyPoint, DomainError, Point, RealPoint
from .scalars import I, ONE, PI, ZERO, PiScalar, ScalarLike

Exps = Tuple[int, ...]

HVARS = ("z", "zbar", "t")
CENTER_VARS = ("z0", "zbar0", "t0")
TRANSLATED_VARS = HVARS + CENTER_VARS

#: dilation weights of the named variables
WEIGHTS = {"z": 1, "zbar": 1, "t": 2, "z0": 1, "zbar0": 1, "t0": 2,
           "x": 1, "y": 1, "x0": 1, "y0": 1, "R": 1}

FIELDS = ("X", "Y", "T")


def _conjugate_name(v: str) -> str:
    """``z <-> zbar`` and ``z0 <-> zbar0``: split at the first digit."""
    m = re.match(r"([A-Za-z_]*?)(bar)?(\d*)$", v)
    if m is None:
        return v
    stem, bar, suffix = m.groups()
    return stem + suffix if bar else stem + "bar" + suffix


class Poly:
    """Polynomial over ``vars`` stored as ``{exponent tuple: PiScalar}``."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exps, ScalarLike] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean: Dict[Exps, PiScalar] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent tuple {exps} for variables {self.vars}")
            c = PiScalar.coerce(c)
            if c:
                clean[exps] = clean[exps] + c if exps in clean else c
        self.terms = {e: c for e, c in clean.items() if c}

    def _new(self, terms: Dict[Exps, PiScalar]) -> "Poly":
        # trusted: terms has no zero coefficients
        obj = Poly.__new__(type(self))
        obj.vars = self.vars
        obj.terms = terms
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, vars: Sequence[str], c: ScalarLike) -> "Poly":
        return Poly(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if sum(exps) != 1:
            raise ValueError(f"{name!r} is not one of {vars}")
        return Poly(vars, {exps: ONE})

    def zero(self) -> "Poly":
        return self._new({})

    def const(self, c: ScalarLike) -> "Poly":
        c = PiScalar.coerce(c)
        return self._new({(0,) * len(self.vars): c} if c else {})

    def var(self, name: str) -> "Poly":
        return self._new({tuple(1 if v == name else 0 for v in self.vars): ONE})

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exps: Exps) -> PiScalar:
        return self.terms.get(tuple(exps), ZERO)

    def sorted_terms(self):
        """Terms in canonical order: graded lexicographic, highest first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading_term(self) -> "Poly":
        if not self.terms:
            return self.zero()
        exps, c = self.sorted_terms()[0]
        return self._new({exps: c})

    def weight(self, exps: Exps) -> int:
        return sum(WEIGHTS.get(v, 1) * e for v, e in zip(self.vars, exps))

    def homogeneous_degree(self):
        """Dilation degree if all monomials share one, else the string ``"mixed"``."""
        if not self.terms:
            raise DomainError("the zero polynomial has no homogeneous degree")
        degrees = {self.weight(e) for e in self.terms}
        return degrees.pop() if len(degrees) == 1 else "mixed"

    def max_degree(self, name: str) -> int:
        idx = self.vars.index(name)
        return max((e[idx] for e in self.terms), default=0)

    def is_pi_free(self) -> bool:
        return all(c.is_pi_free() for c in self.terms.values())

    # -- ring operations ------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return self.const(PiScalar.coerce(other))

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                c = PiScalar.coerce(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        other = self._coerce(other)
        out: Dict[Exps, PiScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return self._new({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: ScalarLike) -> "Poly":
        c = PiScalar.coerce(c)
        if not c:
            return self.zero()
        return self._new({e: v * c for e, v in self.terms.items() if v * c})

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            if len(other.terms) == 1 and not any(next(iter(other.terms))):
                other = next(iter(other.terms.values()))
            else:
                raise DomainError("division is only defined by nonzero scalars")
        return self.scale(PiScalar.coerce(other).inverse())

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"polynomial power must be a nonnegative integer, got {n!r}")
        result, base = self.const(ONE), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self.terms == self.const(PiScalar.coerce(other)).terms
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    # -- structural maps ------------------------------------------------
    def _conjugate_perm(self):
        pos = {v: i for i, v in enumerate(self.vars)}
        perm = []
        for v in self.vars:
            perm.append(pos.get(_conjugate_name(v), pos[v]))
        return perm

    def conjugate(self) -> "Poly":
        perm = self._conjugate_perm()
        return self._new({tuple(e[j] for j in perm): c.conjugate() for e, c in self.terms.items()})

    def real_part(self) -> "Poly":
        return (self + self.conjugate()).scale(Fraction(1, 2))

    def imag_part(self) -> "Poly":
        return (self - self.conjugate()) * PiScalar.gaussian(0, Fraction(-1, 2))

    def diff(self, name: str) -> "Poly":
        idx = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            if k:
                out[e[:idx] + (k - 1,) + e[idx + 1:]] = c.scale(k)
        return self._new(out)

    def substitute(self, images: Mapping[str, "Poly"], target_vars: Sequence[str]) -> "Poly":
        """Replace each variable by a polynomial over ``target_vars``."""
        target_vars = tuple(target_vars)
        unit = Poly.constant(target_vars, ONE)
        imgs = [images[v] if v in images else Poly.variable(target_vars, v) for v in self.vars]
        powers = [[unit] for _ in self.vars]
        result = Poly(target_vars)
        for e, c in self.terms.items():
            term = unit.scale(c)
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    while len(cache) <= k:
                        cache.append(cache[-1] * imgs[i])
                    term = term * cache[k]
            result = result + term
        return result

    def rename(self, new_vars: Sequence[str]) -> "Poly":
        new_vars = tuple(new_vars)
        if len(new_vars) != len(self.vars):
            raise ValueError("rename needs the same number of variables")
        return Poly(new_vars, self.terms)

    def embed(self, new_vars: Sequence[str]) -> "Poly":
        """View as a polynomial over a superset of variables."""
        new_vars = tuple(new_vars)
        idx = [new_vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for j, k in zip(idx, e):
                ne[j] = k
            out[tuple(ne)] = c
        return Poly(new_vars, out)

    def specialize(self, values: Mapping[str, ScalarLike]) -> "Poly":
        """Substitute exact scalars for some variables; keep the rest."""
        keep = tuple(v for v in self.vars if v not in values)
        vals = {v: PiScalar.coerce(values[v]) for v in values}
        out: Dict[Exps, PiScalar] = {}
        for e, c in self.terms.items():
            ne = []
            for v, k in zip(self.vars, e):
                if v in vals:
                    if k:
                        c = c * vals[v] ** k
                else:
                    ne.append(k)
            if c:
                ne = tuple(ne)
                out[ne] = out[ne] + c if ne in out else c
        return Poly(keep, out)

    # -- evaluation -----------------------------------------------------
    def evaluate_exact(self, values: Mapping[str, ScalarLike]) -> PiScalar:
        p = self.specialize(values)
        if p.vars:
            raise ValueError(f"unassigned variables {p.vars}")
        return p.coefficient(())

    def numeric_coefficients(self):
        exps = np.array(list(self.terms.keys()), dtype=np.int64).reshape(-1, len(self.vars))
        coeffs = np.array([complex(c) for c in self.terms.values()], dtype=complex)
        return exps, coeffs

    def evaluate_numeric(self, values: Mapping[str, object]):
        """Evaluate at float/complex scalars or broadcastable arrays."""
        arrays = [np.asarray(values[v], dtype=complex) for v in self.vars]
        shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
        out = np.zeros(shape, dtype=complex)
        if not self.terms:
            return out
        cache = [{0: np.ones(shape, dtype=complex)} for _ in self.vars]

        def power(i, k):
            table = cache[i]
            if k not in table:
                table[k] = power(i, k - 1) * arrays[i]
            return table[k]

        for e, c in self.terms.items():
            term = complex(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    # -- printing -------------------------------------------------------
    def monomial_str(self, exps: Exps) -> str:
        parts = []
        for v, k in zip(self.vars, exps):
            if k == 1:
                parts.append(v)
            elif k > 1:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = [format_term(c, self.monomial_str(e)) for e, c in self.sorted_terms()]
        text = pieces[0]
        for p in pieces[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"


def format_term(c: PiScalar, mono: str) -> str:
    """Render ``c * mono`` with pi powers and denominators pulled into a fraction."""
    if not mono:
        text = str(c)
        return text if len(c.terms) <= 1 or text.startswith("(") else f"({text})"
    if len(c.terms) == 1:
        (k, (re, im)), = c.terms.items()
        if im == 0:
            num, den = re.numerator, re.denominator
            sign = "-" if num < 0 else ""
            top = [] if abs(num) == 1 else [str(abs(num))]
            bottom = [] if den == 1 else [str(den)]
            if k:
                pi_txt = "pi" if abs(k) == 1 else f"pi^{abs(k)}"
                (top if k > 0 else bottom).append(pi_txt)
            top.append(mono)
            text = sign + "*".join(top)
            if bottom:
                tail = bottom[0] if len(bottom) == 1 else "(" + "*".join(bottom) + ")"
                text += "/" + tail
            return text
        if re == 0 and k == 0:
            if im == 1:
                return f"i*{mono}"
            if im == -1:
                return f"-i*{mono}"
    text = str(c)
    if len(c.terms) > 1 or not text.startswith("("):
        text = f"({text})"
    return f"{text}*{mono}"


class HPoly(Poly):
    """Polynomial in ``z, zbar, t`` (a function on the Heisenberg group)."""

    __slots__ = ()

    def __init__(self, terms: Mapping[Exps, ScalarLike] | None = None):
        super().__init__(HVARS, terms)

    @classmethod
    def from_poly(cls, p: Poly) -> "HPoly":
        if p.vars != HVARS:
            p = p.embed(HVARS) if set(p.vars) <= set(HVARS) else None
            if p is None:
                raise ValueError("polynomial is not over (z, zbar, t)")
        obj = Poly.__new__(cls)
        obj.vars = HVARS
        obj.terms = dict(p.terms)
        return obj

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff: ScalarLike = 1) -> "HPoly":
        return cls({(a, b, c): coeff})

    def conjugate(self) -> "HPoly":
        return self._new({(b, a, c): v.conjugate() for (a, b, c), v in self.terms.items()})

    def evaluate(self, p: AnyPoint):
        """Value at a point: exact :class:`PiScalar` for :class:`Point`, complex for :class:`RealPoint`."""
        if isinstance(p, Point):
            z = PiScalar.gaussian(p.x, p.y)
            return self.evaluate_exact({"z": z, "zbar": z.conjugate(), "t": p.t})
        z = complex(p.x, p.y)
        return complex(self.evaluate_numeric({"z": z, "zbar": z.conjugate(), "t": p.t}))

    def evaluate_xyt(self, x, y, t) -> np.ndarray:
        x, y, t = (np.asarray(a, dtype=float) for a in (x, y, t))
        z = x + 1j * y
        return self.evaluate_numeric({"z": z, "zbar": np.conj(z), "t": t})

    def to_xyt(self) -> Poly:
        """Rewrite in real coordinates ``(x, y, t)``."""
        xyt = ("x", "y", "t")
        x, y = Poly.variable(xyt, "x"), Poly.variable(xyt, "y")
        return self.substitute({"z": x + y * I, "zbar": x - y * I}, xyt)


def z() -> HPoly:
    return HPoly.monomial(1, 0, 0)


def zbar() -> HPoly:
    return HPoly.monomial(0, 1, 0)


def t() -> HPoly:
    return HPoly.monomial(0, 0, 1)


def abs_z_squared() -> HPoly:
    return HPoly.monomial(1, 1, 0)


# -- vector fields ---------------------------------------------------------

def _as_hpoly(p: Poly) -> HPoly:
    return p if isinstance(p, HPoly) else HPoly.from_poly(p)


def apply_field(field: str, P: Poly) -> HPoly:
    """Apply a left-invariant field ``X``, ``Y`` or ``T`` to an :class:`HPoly`.

    In complex coordinates ``X = d_z + d_zbar - i(z - zbar) d_t`` and
    ``Y = i(d_z - d_zbar) - (z + zbar) d_t``.
    """
    P = _as_hpoly(P)
    if field == "T":
        return P.diff("t")
    dz, dzb, dt = P.diff("z"), P.diff("zbar"), P.diff("t")
    if field == "X":
        return dz + dzb + (z() - zbar()) * dt * (-I)
    if field == "Y":
        return (dz - dzb) * I - (z() + zbar()) * dt
    raise DomainError(f"unknown field {field!r}; expected one of {FIELDS}")


def sub_laplacian(P: Poly) -> HPoly:
    return apply_field("X", apply_field("X", P)) + apply_field("Y", apply_field("Y", P))


def laplace_beltrami(P: Poly) -> HPoly:
    """``X^2 u + Y^2 u + d^2u/dt^2``."""
    P = _as_hpoly(P)
    return sub_laplacian(P) + P.diff("t").diff("t")


def homogeneous_degree(P: Poly):
    return P.homogeneous_degree()


# -- left translation ------------------------------------------------------

def left_translate(P: Poly, center="symbolic") -> Poly:
    """``q -> P(center * q)``.

    With ``center="symbolic"`` the result is a polynomial over
    ``(z, zbar, t, z0, zbar0, t0)``; with an exact :class:`Point` it is an
    :class:`HPoly`.
    """
    P = _as_hpoly(P)
    if isinstance(center, str):
        if center != "symbolic":
            raise DomainError(f"unknown center {center!r}")
        V = TRANSLATED_VARS
        zq, zbq, tq = (Poly.variable(V, v) for v in HVARS)
        z0, zb0, t0 = (Poly.variable(V, v) for v in CENTER_VARS)
        images = {
            "z": z0 + zq,
            "zbar": zb0 + zbq,
            "t": t0 + tq + (z0 * zbq - zb0 * zq) * (-I),
        }
        return P.substitute(images, V)
    if isinstance(center, RealPoint):
        raise DomainError("exact left translation needs an exact Point")
    z0 = PiScalar.gaussian(center.x, center.y)
    zb0 = z0.conjugate()
    images = {
        "z": z() + z0,
        "zbar": zbar() + zb0,
        "t": t() + center.t + (zbar() * z0 - z() * zb0) * (-I),
    }
    return HPoly.from_poly(P.substitute(images, HVARS))


# -- text parser -----------------------------------------------------------

class ParseError(ValueError):
    """A polynomial expression could not be parsed."""


def parse_poly(text: str, vars: Sequence[str] = HVARS) -> Poly:
    """Parse an expression in the given variables plus constants ``i`` and ``pi``.

    Grammar: rational literals, ``+ - * / ^`` (``**`` also accepted) and
    parentheses. Division is only allowed by constants.
    """
    vars = tuple(vars)
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def build(node) -> Poly:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            value = node.value
            return Poly.constant(vars, Fraction(repr(value)) if isinstance(value, float) else value)
        if isinstance(node, ast.Name):
            if node.id in vars:
                return Poly.variable(vars, node.id)
            if node.id == "i":
                return Poly.constant(vars, I)
            if node.id == "pi":
                return Poly.constant(vars, PI)
            raise ParseError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                try:
                    return left / right
                except (DomainError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad division in {text!r}: {exc}") from None
            if isinstance(node.op, ast.Pow):
                if right.terms and set(right.terms) == {(0,) * len(vars)}:
                    c = right.terms[(0,) * len(vars)]
                    if c.is_rational():
                        q = c.gaussian_part()[0]
                        if q.denominator == 1 and q >= 0:
                            return left ** int(q)
                if not right.terms:
                    return left ** 0
                raise ParseError("exponents must be nonnegative integer literals")
        raise ParseError(f"unsupported syntax in {text!r}: {ast.dump(node)[:60]}")

    return build(tree)


def parse_hpoly(text: str) -> HPoly:
    return HPoly.from_poly(parse_poly(text, HVARS))


def random_hpoly(rng, max_degree: int, n_terms: int = 6, max_num: int = 9) -> HPoly:
    """Random polynomial with small Gaussian-rational coefficients (for tests)."""
    terms = {}
    for _ in range(n_terms):
        a = int(rng.integers(0, max_degree + 1))
        b = int(rng.integers(0, max_degree - a + 1))
        c = int(rng.integers(0, (max_degree - a - b) // 2 + 1))
        re = Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, 5)))
        im = Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, 5)))
        terms[(a, b, c)] = PiScalar.gaussian(re, im)
    return HPoly(terms)

