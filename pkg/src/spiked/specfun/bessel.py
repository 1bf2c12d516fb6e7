"""Modified Bessel functions I_nu, K_nu of real positive order and argument."""
import math
from dataclasses import dataclass

import numpy as np

from .._accel import jit
from ..errors import DomainError
from ._bessel_kernels import ik_scaled

Z_MIN = 1e-8
Z_MAX = 1e4
NU_MAX = 5.0


@dataclass(frozen=True)
class BesselOrder:
    """Order nu = 1/(alpha - 2) tied to the inverse-power exponent alpha."""

    nu: float
    alpha: float

    def __post_init__(self):
        if not (0.0 < self.nu <= NU_MAX):
            raise DomainError(f"Bessel order must lie in (0, {NU_MAX}], got {self.nu}")
        if not self.alpha > 2.0:
            raise DomainError(f"alpha must exceed 2, got {self.alpha}")

    @classmethod
    def from_alpha(cls, alpha):
        alpha = float(alpha)
        if not alpha > 2.0:
            raise DomainError(f"alpha must exceed 2, got {alpha}")
        return cls(nu=1.0 / (alpha - 2.0), alpha=alpha)

    @classmethod
    def from_nu(cls, nu):
        nu = float(nu)
        if not nu > 0.0:
            raise DomainError(f"Bessel order must be positive, got {nu}")
        return cls(nu=nu, alpha=2.0 + 1.0 / nu)


@dataclass(frozen=True)
class ScaledBesselValue:
    """``value = mantissa * exp(scale_exponent)``; fields may be arrays."""

    mantissa: object
    scale_exponent: object

    def value(self):
        return self.mantissa * np.exp(self.scale_exponent)


@jit
def _ik_array(nu, z, out):
    for j in range(z.shape[0]):
        a, b, c, d = ik_scaled(nu, z[j])
        out[0, j] = a
        out[1, j] = b
        out[2, j] = c
        out[3, j] = d


def ik_scaled_array(nu, z):
    """Scaled ``(I_nu, K_nu, I_{nu+1}, K_{nu+1})`` as a (4, ...) array.

    Internal entry point: no range check, any ``z > 0``.
    """
    z = np.asarray(z, dtype=float)
    flat = np.ascontiguousarray(z.ravel())
    out = np.empty((4, flat.size))
    _ik_array(float(nu), flat, out)
    return out.reshape((4,) + z.shape)


def _order_value(order):
    return order.nu if isinstance(order, BesselOrder) else float(order)


def _check(z):
    z = np.asarray(z, dtype=float)
    if np.any(~(z >= Z_MIN)) or np.any(~(z <= Z_MAX)):
        raise DomainError(f"Bessel argument must lie in [{Z_MIN}, {Z_MAX}]")
    return z


def _pack(scaled, z, sign, want_scaled):
    if want_scaled:
        if z.ndim == 0:
            return ScaledBesselValue(float(scaled), sign * float(z))
        return ScaledBesselValue(scaled, sign * z)
    with np.errstate(over="ignore"):
        val = scaled * np.exp(sign * z)
    return float(val) if z.ndim == 0 else val


def bessel_i(order, z, scaled=False):
    """I_nu(z); with ``scaled=True`` a :class:`ScaledBesselValue` with exponent z.

    ``order`` is a :class:`BesselOrder` or a plain float.
    """
    z = _check(z)
    vals = ik_scaled_array(_order_value(order), z)[0]
    return _pack(vals, z, 1.0, scaled)


def bessel_k(order, z, scaled=False):
    """K_nu(z); with ``scaled=True`` a :class:`ScaledBesselValue` with exponent -z."""
    z = _check(z)
    vals = ik_scaled_array(_order_value(order), z)[1]
    return _pack(vals, z, -1.0, scaled)


def bessel_ik_derivatives(order, z):
    """Scaled ``(I, K, I', K')`` at z, derivatives from the order-raising recurrences.

    I' = I_{nu+1} + (nu/z) I and K' = -K_{nu+1} + (nu/z) K; the I pair carries
    ``exp(-z)`` and the K pair ``exp(z)``.
    """
    z = _check(z)
    nu = _order_value(order)
    i, k, i1, k1 = ik_scaled_array(nu, z)
    return i, k, i1 + nu / z * i, -k1 + nu / z * k


def _i_series(v, z, terms=80):
    # sum_m (z/2)^(2m+v) / (m! Gamma(m+v+1)); negative non-integer v allowed
    half = 0.5 * z
    term = half ** v / math.gamma(v + 1.0)
    total = term
    q = half * half
    for m in range(1, terms):
        term *= q / (m * (m + v))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def bessel_k_reflection(nu, z):
    """K_nu(z) = (pi/2)(I_{-nu} - I_nu)/sin(nu pi) from power series, non-integer nu.

    Independent small-argument route; loses about ``exp(2z) * 1e-16`` relative
    to cancellation, so it is only trustworthy for moderate z.
    """
    nu = float(nu)
    if abs(nu - round(nu)) < 1e-8:
        raise DomainError("reflection formula needs non-integer order")
    return 0.5 * math.pi * (_i_series(-nu, z) - _i_series(nu, z)) / math.sin(nu * math.pi)


def bessel_k_asymptotic(nu, z):
    """K_nu(z) from the large-argument Hankel series alone (accurate for large z)."""
    from ._bessel_kernels import _hankel
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * _hankel(float(nu), float(z), 1.0)
