"""Strong harmonicity and L-harmonicity on the first Heisenberg group.

Exact Koranyi-ball averages of polynomials, the Koranyi spherical harmonic
basis, a strong-harmonicity classifier and quadrature checks of the kernel
mean value property, mollifier convolutions and the three-spheres inequality.
"""
__version__ = "0.1.0"

from .group import (DomainError, GaugeKind, Point, RealPoint, ball_volume, dilate,
                    distance, gauge, inverse, multiply)
from .harmonics import HarmonicIndex, basis_of_degree, coeff_C, r_poly, spherical_harmonic
from .mvp import (ball_average, classify_up_to_degree, harmonicity_defect, mean_at_origin)
from .poly import (HPoly, Poly, apply_field, homogeneous_degree, left_translate, parse_hpoly,
                   sub_laplacian)
from .scalars import PiScalar

__all__ = [
    "DomainError", "GaugeKind", "Point", "RealPoint", "ball_volume", "dilate", "distance",
    "gauge", "inverse", "multiply", "HarmonicIndex", "basis_of_degree", "coeff_C", "r_poly",
    "spherical_harmonic", "ball_average", "classify_up_to_degree", "harmonicity_defect",
    "mean_at_origin", "HPoly", "Poly", "apply_field", "homogeneous_degree", "left_translate",
    "parse_hpoly", "sub_laplacian", "PiScalar",
]
