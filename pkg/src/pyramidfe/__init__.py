"""Exact construction and verification of H1-conforming pyramid finite elements.

Two families are provided: ``Family.YMINUS`` matches tensor-product elements
on the quadrilateral base and ``Family.Y`` matches serendipity elements there.
Both match Lagrange elements on the triangular faces.
"""
from .element import Element, certify_unisolvence, interpolate, mass_matrix, nodal_basis, tabulate, vandermonde
from .ratfun import Point3, RatFun, RatTerm, canonicalize, evaluate, gradient, integrate_reference, multiply
from .spaces import Family, SpaceSpec, bubble, build_shape_basis, dimension, interior_index_space, sldeg

__all__ = [
    "Element",
    "Family",
    "Point3",
    "RatFun",
    "RatTerm",
    "SpaceSpec",
    "bubble",
    "build_shape_basis",
    "canonicalize",
    "certify_unisolvence",
    "dimension",
    "evaluate",
    "gradient",
    "integrate_reference",
    "interior_index_space",
    "interpolate",
    "mass_matrix",
    "multiply",
    "nodal_basis",
    "sldeg",
    "tabulate",
    "vandermonde",
]
