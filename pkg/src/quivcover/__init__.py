"""Exact computations for bound quivers, Galois coverings and finitely presented functors."""

from .exactlin import Field, Matrix
from .quivercat import BoundPresentation, PeriodicPresentation, orbit_category
from .repmod import Morphism, Representation, decompose, hom_space, is_isomorphic
from .textio import load, parse_presentation

__all__ = [
    "BoundPresentation",
    "Field",
    "Matrix",
    "Morphism",
    "PeriodicPresentation",
    "Representation",
    "decompose",
    "hom_space",
    "is_isomorphic",
    "load",
    "orbit_category",
    "parse_presentation",
]

__version__ = "0.1.0"
