"""Computational engine for intersections of congruent balls.

Exact surface areas, volumes, inradii, erosion profiles, Gauss-Bonnet
totals and radial-projection ratios for bodies with a lower curvature
bound, plus numerical verification of the reverse isoperimetric and
reverse inradius inequalities against lens and spindle reference bodies.
"""

from .errors import (
    DegenerateBodyError,
    EmptyBodyError,
    GenerationError,
    InvalidParameterError,
    LchError,
    NonCompactError,
    NumericError,
    TopologyError,
)

__all__ = [
    "DegenerateBodyError",
    "EmptyBodyError",
    "GenerationError",
    "InvalidParameterError",
    "LchError",
    "NonCompactError",
    "NumericError",
    "TopologyError",
]

__version__ = "0.1.0"
