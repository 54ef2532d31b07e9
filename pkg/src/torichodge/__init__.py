"""Exact Hodge pieces of first-order deformations of affine toric varieties.

The package computes ``dim T^{k,-R}_(i)`` through multi-additive cochain
complexes over the face lattice, cross-checks them against closed formulas,
and validates and quantizes toric Poisson structures.
"""

from .toric import Cone, ConeError, Face, GorensteinData, Polytope, cone_over_polytope
from .hilbert import HilbertBasis, hilbert_basis, surface_cone, surface_data
from .hodge import Degree, HodgeDims, build_complex, poisson_space, scan_degrees, t_dims

__all__ = [
    "Cone",
    "ConeError",
    "Degree",
    "Face",
    "GorensteinData",
    "HilbertBasis",
    "HodgeDims",
    "Polytope",
    "build_complex",
    "cone_over_polytope",
    "hilbert_basis",
    "poisson_space",
    "scan_degrees",
    "surface_cone",
    "surface_data",
    "t_dims",
]

__version__ = "0.1.0"
