"""Numerical toolkit for Strichartz estimates with angular regularity.

Dispersive propagators e^{-it|D|^a} on periodic boxes, mixed space-time
norms, spherical-harmonic multipliers, admissibility arithmetic, and the
Knapp-type sharpness experiment.
"""
from strichartz.errors import (
    ClassificationError,
    DomainError,
    FitError,
    ParameterError,
    PreconditionError,
    RepresentationError,
    ResolutionError,
    SingularMultiplierError,
    StrichartzError,
)
from strichartz.grid import FREQUENCY, SPACE, Field, Grid

__version__ = "0.1.0"

__all__ = [
    "ClassificationError",
    "DomainError",
    "FitError",
    "ParameterError",
    "PreconditionError",
    "RepresentationError",
    "ResolutionError",
    "SingularMultiplierError",
    "StrichartzError",
    "FREQUENCY",
    "SPACE",
    "Field",
    "Grid",
]
