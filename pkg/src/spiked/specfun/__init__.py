"""Special functions and quadrature with no runtime dependency beyond numpy."""
from .bessel import (
    BesselOrder,
    ScaledBesselValue,
    bessel_i,
    bessel_ik_derivatives,
    bessel_k,
    bessel_k_asymptotic,
    bessel_k_reflection,
    ik_scaled_array,
)
from .gamma import gamma
from .hermite import HalfLineState, half_line_state, oscillator_eigenfunction
from .quadrature import gauss_legendre

__all__ = [
    "BesselOrder",
    "HalfLineState",
    "ScaledBesselValue",
    "bessel_i",
    "bessel_ik_derivatives",
    "bessel_k",
    "bessel_k_asymptotic",
    "bessel_k_reflection",
    "gamma",
    "gauss_legendre",
    "half_line_state",
    "ik_scaled_array",
    "oscillator_eigenfunction",
]
