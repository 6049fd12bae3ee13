"""Verification engine for Kahler metrics with maximal c-projective symmetry.

Numerically checks, through truncated Taylor jets at randomly sampled points,
the defining identities and classification claims attached to a family of
explicit 4-dimensional Kahler structures: Kahler conditions, holomorphic
sectional curvature behaviour, the overdetermined metrisability system, the
field equations satisfied by c-projective vector fields, and the symmetry
algebra catalogs (dimension, closure, and case-by-case generator lists).
"""

from .jets import (
    ComplexJet,
    Jet,
    arith,
    constant_jet,
    elementary,
    extract_partial,
    seed_variable,
)

__version__ = "0.1.0"

__all__ = [
    "Jet",
    "ComplexJet",
    "arith",
    "constant_jet",
    "elementary",
    "extract_partial",
    "seed_variable",
    "__version__",
]
