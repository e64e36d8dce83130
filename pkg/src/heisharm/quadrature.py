"""Floating-point quadrature over Folland-Kaplan balls.

Integration over ``B(0, R) = {|z|^4 + t^2 <= R^4}`` uses the chart

    |z|^2 = R^2 s cos(alpha),   t = R^2 s sin(alpha),   z = |z| e^{i theta}

with ``s in [0, 1]``, ``alpha in [-pi/2, pi/2]``, ``theta in [-pi, pi]`` and
``dq = (R^4 / 2) s ds dalpha dtheta``. Here ``s = (gauge/R)^2``, so radial
functions of the gauge depend on ``s`` only, and the kernel weight
``|z|^2 / sqrt(|z|^4 + t^2)`` is simply ``cos(alpha)``. Polynomials in
``(z, zbar, t)`` become smooth in ``(s, alpha)`` after the angular sum, which a
tensor Gauss-Legendre rule integrates to rounding error. The plain
``(r, t, theta)`` chart has a square-root endpoint singularity in ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import roots_legendre
from scipy.stats import qmc

from .group import (HOMOGENEOUS_DIMENSION, DomainError, GaugeKind, RealPoint,
                    ball_volume, FOLLAND_KAPLAN)
from .poly import HPoly, apply_field

MIN_RADIUS = 1e-8

Integrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class QuadratureFailure(ArithmeticError):
    """The integrand produced non-finite samples."""


@dataclass(frozen=True)
class QuadratureSpec:
    radial_order: int = 64
    vertical_order: int = 64
    angular_order: int = 64
    refinement_factor: int = 2

    def __post_init__(self):
        for name in ("radial_order", "vertical_order", "angular_order"):
            if getattr(self, name) < 2:
                raise DomainError(f"{name} must be >= 2")
        if self.refinement_factor < 2:
            raise DomainError("refinement_factor must be >= 2")

    def refined(self) -> "QuadratureSpec":
        f = self.refinement_factor
        return QuadratureSpec(self.radial_order * f, self.vertical_order * f,
                              self.angular_order * f, f)


DEFAULT_SPEC = QuadratureSpec()


@lru_cache(maxsize=32)
def _gauss_legendre(n: int, a: float, b: float):
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


@lru_cache(maxsize=16)
def _unit_ball_grid(spec: QuadratureSpec):
    """Nodes ``(x, y, t)`` and weights for ``B(0, 1)`` in the gauge chart."""
    s, ws = _gauss_legendre(spec.radial_order, 0.0, 1.0)
    al, wa = _gauss_legendre(spec.vertical_order, -math.pi / 2, math.pi / 2)
    th, wt = _gauss_legendre(spec.angular_order, -math.pi, math.pi)
    S, A, TH = np.meshgrid(s, al, th, indexing="ij")
    W = 0.5 * (ws * s)[:, None, None] * wa[None, :, None] * wt[None, None, :]
    rho = np.sqrt(S * np.cos(A))
    x, y, t = rho * np.cos(TH), rho * np.sin(TH), S * np.sin(A)
    for arr in (x, y, t, W, S, A):
        arr.setflags(write=False)
    return x, y, t, W, S, A


def _check_radius(R: float) -> float:
    R = float(R)
    if not R > 0:
        raise DomainError(f"radius must be positive, got {R}")
    if R < MIN_RADIUS:
        raise DomainError(f"radius {R} is below {MIN_RADIUS} (ill-conditioned)")
    return R


def ball_grid(center: RealPoint, R: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Translated nodes ``center * q`` for ``q`` in ``B(0, R)``, weights, and the
    unit-chart coordinates ``(s, alpha)`` of each node."""
    R = _check_radius(R)
    x, y, t, W, S, A = _unit_ball_grid(spec)
    qx, qy, qt = R * x, R * y, R * R * t
    px = center.x + qx
    py = center.y + qy
    pt = center.t + qt + 2.0 * (qx * center.y - center.x * qy)
    return (px, py, pt), W * R ** 4, (S, A)


def _integrate(values: np.ndarray, weights: np.ndarray) -> float:
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise QuadratureFailure("integrand returned non-finite samples")
    return float(np.sum(values * weights).real) if np.iscomplexobj(values) \
        else float(np.sum(values * weights))


def quad_ball(f: Integrand | HPoly, center: RealPoint, R: float,
              spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_{B(center, R)} f(q) dq`` for a vectorised real ``f(x, y, t)``."""
    f = as_integrand(f)
    (x, y, t), W, _ = ball_grid(center, R, spec)
    return _integrate(f(x, y, t), W)


def quad_ball_with_error(f, center: RealPoint, R: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Integral at ``spec`` and the estimate ``|I(spec) - I(spec.refined())|``."""
    value = quad_ball(f, center, R, spec)
    return value, abs(value - quad_ball(f, center, R, spec.refined()))


def real_part_evaluator(P: HPoly) -> Integrand:
    """Vectorised ``Re P(x, y, t)`` using real arithmetic on the (x, y, t) form."""
    exps, coeffs = P.to_xyt().numeric_coefficients()
    coeffs = coeffs.real

    def f(x, y, t):
        x, y, t = (np.asarray(a, dtype=float) for a in (x, y, t))
        shape = np.broadcast_shapes(x.shape, y.shape, t.shape)
        tables = []
        for base, top in zip((x, y, t), exps.max(axis=0, initial=0)):
            pows = [np.ones(shape)]
            for _ in range(int(top)):
                pows.append(pows[-1] * base)
            tables.append(pows)
        out = np.zeros(shape)
        # overflow surfaces as non-finite samples, which the integrators reject
        with np.errstate(over="ignore", invalid="ignore"):
            for (a, b, c), coeff in zip(exps, coeffs):
                if coeff:
                    out += coeff * (tables[0][a] * tables[1][b] * tables[2][c])
        return out

    return f


def as_integrand(f) -> Integrand:
    if isinstance(f, HPoly):
        return real_part_evaluator(f)
    if callable(f):
        return f
    c = float(f)
    return lambda x, y, t: np.full(np.shape(x), c)


def kernel_weight(x, y, t) -> np.ndarray:
    """``|grad_0 N|^2 = |z|^2 / sqrt(|z|^4 + t^2)`` (0 at the origin)."""
    rho2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
    den = np.sqrt(rho2 * rho2 + np.asarray(t) ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, rho2 / np.where(den > 0, den, 1.0), 0.0)


@dataclass(frozen=True)
class KernelMvpResult:
    center: RealPoint
    radius: float
    ratio: float
    point_value: float
    abs_error_estimate: float

    @property
    def discrepancy(self) -> float:
        return abs(self.ratio - self.point_value)


def _kernel_ratio(u: Integrand, center: RealPoint, R: float, spec: QuadratureSpec) -> float:
    (x, y, t), W, (_, A) = ball_grid(center, R, spec)
    # weight of the untranslated node q, which is cos(alpha) in the gauge chart
    weight = np.cos(A)
    num = _integrate(u(x, y, t) * weight, W)
    den = _integrate(weight, W)
    return num / den


def kernel_mvp_ratio(u: HPoly | Integrand, center: RealPoint, R: float,
                     spec: QuadratureSpec = DEFAULT_SPEC,
                     estimate_error: bool = True) -> KernelMvpResult:
    """Kernel-weighted mean ``int u(pq) w(q) dq / int w(q) dq`` over ``B(0, R)``.

    For L-harmonic ``u`` this equals ``u(p)``. The ratio is computed with
    ``spec``; the error estimate compares against ``spec.refined()`` and is NaN
    when ``estimate_error`` is false.
    """
    f = as_integrand(u)
    ratio = _kernel_ratio(f, center, R, spec)
    err = abs(ratio - _kernel_ratio(f, center, R, spec.refined())) if estimate_error else math.nan
    value = float(np.asarray(f(np.array(center.x), np.array(center.y), np.array(center.t))))
    return KernelMvpResult(center, float(R), ratio, value, err)


# -- mollifiers ------------------------------------------------------------

BUMP_KINDS = ("exp_bump", "char_ball")
BUMP_POWER = 4


def _bump_profile(s: np.ndarray) -> np.ndarray:
    # exp(-1/(1 - N^4)) with N^4 = s^2 on the unit ball
    s = np.asarray(s, dtype=float)
    inside = s < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(inside, np.exp(-1.0 / np.where(inside, 1.0 - s * s, 1.0)), 0.0)


@lru_cache(maxsize=16)
def bump_normalization(spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``C`` with ``C^{-1} = int psi``; cached per quadrature spec."""
    _, W, (S, _) = ball_grid(RealPoint.identity(), 1.0, spec)
    return 1.0 / _integrate(_bump_profile(S), W)


def mollifier_convolve(u: HPoly | Integrand, p: RealPoint, eps: float, kind: str = "exp_bump",
                       spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``(u * psi_eps)(p) = int u(p q^{-1}) psi_eps(q) dq``."""
    if kind not in BUMP_KINDS:
        raise DomainError(f"unknown mollifier {kind!r}; expected one of {BUMP_KINDS}")
    eps = _check_radius(eps)
    f = as_integrand(u)
    # nodes of B(0, eps) mapped through q -> p q^{-1}; the ball is inversion-symmetric
    x, y, t, W, S, _ = _unit_ball_grid(spec)
    qx, qy, qt = -eps * x, -eps * y, -eps * eps * t
    px = p.x + qx
    py = p.y + qy
    pt = p.t + qt + 2.0 * (qx * p.y - p.x * qy)
    W = W * eps ** 4
    if kind == "char_ball":
        density = np.full(S.shape, 1.0 / ball_volume(eps))
    else:
        density = bump_normalization(spec) * _bump_profile(S) / eps ** HOMOGENEOUS_DIMENSION
    return _integrate(f(px, py, pt) * density, W)


# -- spheres ---------------------------------------------------------------

def sphere_point(r: float, theta, phi):
    """Point on the gauge sphere of radius ``r``: ``|z| = r sqrt(cos phi)``, ``t = r^2 sin phi``."""
    theta, phi = np.asarray(theta, float), np.asarray(phi, float)
    rho = r * np.sqrt(np.clip(np.cos(phi), 0.0, None))
    return rho * np.cos(theta), rho * np.sin(theta), r * r * np.sin(phi)


def sphere_sup(u: HPoly | Integrand, r: float, samples: int = 4096, seed: int = 0) -> float:
    """``M(r) = sup{u(q) : N(q) = r}`` by Sobol sampling plus local refinement."""
    if not r > 0:
        raise DomainError(f"sphere radius must be positive, got {r}")
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    f = as_integrand(u)
    m = int(math.ceil(math.log2(samples)))
    pts = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)
    theta = -math.pi + 2 * math.pi * pts[:, 0]
    phi = -math.pi / 2 + math.pi * pts[:, 1]
    # include the poles and equator samples exactly
    theta = np.concatenate([theta, [0.0, 0.0]])
    phi = np.concatenate([phi, [math.pi / 2, -math.pi / 2]])
    vals = np.asarray(f(*sphere_point(r, theta, phi)), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureFailure("non-finite sample on the sphere")
    best = float(vals.max())
    order = np.argsort(vals)[::-1][:8]

    def neg(v):
        th, ph = v[0], float(np.clip(v[1], -math.pi / 2, math.pi / 2))
        return -float(np.asarray(f(*sphere_point(r, np.array(th), np.array(ph)))))

    for j in order:
        res = minimize(neg, x0=[theta[j], phi[j]], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
        best = max(best, -float(res.fun))
    return best


@dataclass(frozen=True)
class ThreeSpheresResult:
    radii: tuple
    M: tuple
    rhs: float
    satisfied: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.M[1]


def three_spheres_rhs(M1: float, M2: float, r1: float, r: float, r2: float,
                      Q: int = HOMOGENEOUS_DIMENSION) -> float:
    e = 2 - Q
    a, b, c = r1 ** e, r ** e, r2 ** e
    return M1 * (b - c) / (a - c) + M2 * (a - b) / (a - c)


def three_spheres_check(u: HPoly | Integrand, radii: Sequence[float], samples: int = 4096,
                        tol: float = 1e-9) -> ThreeSpheresResult:
    r1, r, r2 = (float(v) for v in radii)
    if not 0 < r1 < r < r2:
        raise DomainError(f"radii must satisfy 0 < r1 < r < r2, got {radii}")
    M = tuple(sphere_sup(u, rad, samples) for rad in (r1, r, r2))
    rhs = three_spheres_rhs(M[0], M[2], r1, r, r2)
    return ThreeSpheresResult((r1, r, r2), M, rhs, M[1] <= rhs + tol * max(1.0, abs(rhs)))


# -- difference quotients --------------------------------------------------

def difference_quotient(u: HPoly | Integrand, p: RealPoint, field: str, h: float) -> float:
    """Pansu quotient ``(u(p exp(hV)) - u(p)) / h`` for ``V`` = X or Y."""
    if h == 0:
        raise DomainError("step h must be nonzero")
    f = as_integrand(u)
    if field == "X":
        q = (p.x + h, p.y, p.t + 2 * p.y * h)
    elif field == "Y":
        q = (p.x, p.y + h, p.t - 2 * p.x * h)
    else:
        raise DomainError(f"difference quotients are horizontal; got field {field!r}")
    u1 = float(np.asarray(f(*(np.array(c) for c in q))))
    u0 = float(np.asarray(f(np.array(p.x), np.array(p.y), np.array(p.t))))
    return (u1 - u0) / h


DEFAULT_STEPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def difference_quotient_errors(u: HPoly, p: RealPoint, field: str,
                               steps: Sequence[float] = DEFAULT_STEPS):
    """``|D_h u(p) - (V u)(p)|`` for each step ``h``."""
    exact = apply_field(field, u).evaluate(p).real
    return [abs(difference_quotient(u, p, field, h) - exact) for h in steps]


def convergence_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    pairs = [(math.log(h), math.log(e)) for h, e in zip(steps, errors) if e > 0]
    if len(pairs) < 2:
        return math.inf
    xs, ys = np.array(pairs).T
    return float(np.polyfit(xs, ys, 1)[0])

