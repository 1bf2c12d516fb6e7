"""Numerical laboratory for the spiked harmonic oscillator and its linear-term modification."""
from .errors import DomainError, NumericalFailure
from .oscillator import PotentialSpec, RadialGrid, exact_spectrum, potential_eval

__all__ = [
    "DomainError",
    "NumericalFailure",
    "PotentialSpec",
    "RadialGrid",
    "exact_spectrum",
    "potential_eval",
]
__version__ = "0.1.0"
