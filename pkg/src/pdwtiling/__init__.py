"""Spherical tilings by congruent quadrangles over pseudo-double wheels."""
from .errors import (DegenerateTile, DomainError, NoSuchTriangle, NotATile,
                     SingularCotangent, VerificationError)

__version__ = "0.1.0"

__all__ = [
    "DegenerateTile", "DomainError", "NoSuchTriangle", "NotATile",
    "SingularCotangent", "VerificationError", "__version__",
]
