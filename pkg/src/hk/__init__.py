"""Exact computations around fourfolds with non-symplectic involutions: even
2-elementary lattices, overlattices, twisted Mukai lattices, Chow-ring
degeneracy classes, enumerative counts and truncated determinants."""

from .lattice import (
    Lattice,
    TwoElemInvariants,
    direct_sum,
    discriminant_group,
    is_isometric_2elem,
    parse_lattice,
    signature,
    two_elementary_invariants,
)

__all__ = [
    "Lattice",
    "TwoElemInvariants",
    "direct_sum",
    "discriminant_group",
    "is_isometric_2elem",
    "parse_lattice",
    "signature",
    "two_elementary_invariants",
]

__version__ = "0.1.0"
