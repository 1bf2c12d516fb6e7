"""Green function of L = d^2/dx^2 + (2/x) d/dx - lambda x^-alpha on (0, b), Dirichlet at both ends.

u0 is the solution vanishing at 0 (the trial weight W_alpha) and u_b the
combination x^(-1/2) [K(z_b) I(z) - I(z_b) K(z)] vanishing at b. Values are
carried as mantissa * exp(exponent) so products like u0(x<) u_b(x>) stay finite
where the factors alone would under- or overflow.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure
from .harrell import bessel_argument, w_prefactor
from .specfun import BesselOrder, ik_scaled_array


@dataclass(frozen=True)
class HomSolutionPair:
    alpha: float
    lam: float
    b: float
    nu: float
    c0: float
    zb: float
    ib_scaled: float  # I_nu(z_b) e^-z_b
    kb_scaled: float  # K_nu(z_b) e^z_b
    c_constant: float


def _z(pair, x):
    return bessel_argument(pair.nu, pair.lam, x)


def _check_x(pair, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)) or np.any(x > pair.b * (1.0 + 1e-12)):
        raise DomainError(f"evaluation point must lie in (0, b = {pair.b}]")
    return x


def u0_parts(pair, x):
    """``(mantissa, exponent)`` of u0; exponent is -z(x)."""
    z = _z(pair, x)
    k = ik_scaled_array(pair.nu, z)[1]
    return pair.c0 * np.asarray(x, dtype=float) ** -0.5 * k, -z


def ub_parts(pair, x):
    """``(mantissa, exponent)`` of u_b; exponent is z(x) - z_b."""
    z = _z(pair, x)
    i, k = ik_scaled_array(pair.nu, z)[:2]
    decay = np.exp(2.0 * (pair.zb - z))
    m = np.asarray(x, dtype=float) ** -0.5 * (pair.kb_scaled * i - pair.ib_scaled * k * decay)
    return m, z - pair.zb


def _combine(m, e):
    with np.errstate(over="ignore", under="ignore"):
        out = np.where(m == 0.0, 0.0, m * np.exp(e))
    return float(out) if np.ndim(out) == 0 else out


def u0_eval(pair, x):
    x = _check_x(pair, x)
    return _combine(*u0_parts(pair, x))


def ub_eval(pair, x):
    x = _check_x(pair, x)
    return _combine(*ub_parts(pair, x))


def _derivative_parts(pair, x):
    # u = x^(-1/2) F(z), u' = -u/(2x) + x^(-1/2) F'(z) z', z' = -z/(2 nu x)
    x = np.asarray(x, dtype=float)
    nu = pair.nu
    z = _z(pair, x)
    i, k, i1, k1 = ik_scaled_array(nu, z)
    ip = i1 + nu / z * i
    kp = -k1 + nu / z * k
    dz = -z / (2.0 * nu * x)
    s = x ** -0.5
    decay = np.exp(2.0 * (pair.zb - z))
    u0m = pair.c0 * s * k
    u0pm = -u0m / (2.0 * x) + pair.c0 * s * kp * dz
    ubm = s * (pair.kb_scaled * i - pair.ib_scaled * k * decay)
    ubpm = -ubm / (2.0 * x) + s * (pair.kb_scaled * ip - pair.ib_scaled * kp * decay) * dz
    return u0m, u0pm, ubm, ubpm, z


def scaled_wronskian(pair, x):
    """u0 u_b' - u0' u_b times exp(z_b) (the common factor of both products)."""
    u0m, u0pm, ubm, ubpm, _ = _derivative_parts(pair, x)
    return u0m * ubpm - u0pm * ubm


def wronskian(pair, x):
    return scaled_wronskian(pair, x) * math.exp(-pair.zb)


def _constant_at(pair, x_ref):
    return float(x_ref * x_ref * wronskian(pair, x_ref))


def make_pair(alpha, lam, b):
    """Build u0, u_b and the Abel constant C = x^2 (u0 u_b' - u0' u_b) at x = b/2."""
    order = BesselOrder.from_alpha(alpha)
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    if not b > 0.0:
        raise DomainError("b must be positive")
    nu = order.nu
    zb = float(bessel_argument(nu, lam, b))
    ib, kb = ik_scaled_array(nu, np.array([zb]))[:2, 0]
    pair = HomSolutionPair(alpha=float(alpha), lam=float(lam), b=float(b), nu=nu,
                           c0=w_prefactor(nu, lam), zb=zb, ib_scaled=float(ib),
                           kb_scaled=float(kb), c_constant=math.nan)
    c = _constant_at(pair, 0.5 * b)
    if not abs(c) >= 1e-14:
        raise NumericalFailure(f"Wronskian constant {c:.3e} too small; solutions dependent")
    return HomSolutionPair(**{**pair.__dict__, "c_constant": c})


def wronskian_constant(pair, x_ref=None):
    """C(lambda) measured at ``x_ref`` (default b/2)."""
    if x_ref is None:
        return pair.c_constant
    return _constant_at(pair, x_ref)


def wronskian_constant_closed_form(pair):
    """-C0 K_nu(z_b) / (2 nu), from I K' - I' K = -1/z."""
    return -pair.c0 * pair.kb_scaled * math.exp(-pair.zb) / (2.0 * pair.nu)


def green_eval(pair, x, xi):
    """G_b(x, xi) = (xi^2 / C) u0(min) u_b(max); broadcasts over x and xi."""
    x = _check_x(pair, x)
    xi = _check_x(pair, xi)
    lo = np.minimum(x, xi)
    hi = np.maximum(x, xi)
    m0, e0 = u0_parts(pair, lo)
    mb, eb = ub_parts(pair, hi)
    return _combine(xi * xi / pair.c_constant * m0 * mb, e0 + eb)


def green_eval_system(pair, x, xi):
    """G_b from the continuity/jump system for A(xi), B(xi) with the Wronskian taken at xi.

    Independent of the Abel constant: solves
    A u0(xi) - B u_b(xi) = 0,  B u_b'(xi) - A u0'(xi) = 1.
    """
    x = float(x)
    xi = float(xi)
    u0m, u0pm, ubm, ubpm, z = _derivative_parts(pair, xi)
    # rescale unknowns: a = A e^{-z_xi}, bb = B e^{z_xi - z_b}
    mat = np.array([[float(u0m), -float(ubm)], [-float(u0pm), float(ubpm)]])
    a, bb = np.linalg.solve(mat, np.array([0.0, 1.0]))
    zxi = float(z)
    if x <= xi:
        m, e = u0_parts(pair, x)
        return _combine(a * m, e + zxi)
    m, e = ub_parts(pair, x)
    return _combine(bb * m, e - zxi + pair.zb)


def jump_measure(pair, xi, rel_step=1e-5):
    """Jump of dG/dx across x = xi from one-sided differences, Richardson-extrapolated."""
    xi = float(xi)
    if not (0.05 * pair.b < xi < 0.95 * pair.b):
        raise DomainError("xi must lie in (0.05 b, 0.95 b)")
    h = rel_step * xi

    def g(t):
        return green_eval(pair, t, xi)

    g0 = g(xi)

    def right(s):
        return (g(xi + s) - g0) / s

    def left(s):
        return (g0 - g(xi - s)) / s

    d_plus = 2.0 * right(0.5 * h) - right(h)
    d_minus = 2.0 * left(0.5 * h) - left(h)
    return d_plus - d_minus


def continuity_gap(pair, xi, rel_step=1e-5):
    """One-sided limits of G at xi by quadratic extrapolation; returns G(xi+) - G(xi-)."""
    xi = float(xi)
    h = rel_step * xi

    def limit(sign):
        g1, g2, g3 = (green_eval(pair, xi + sign * s * h, xi) for s in (1, 2, 3))
        return 3.0 * g1 - 3.0 * g2 + g3

    return limit(1.0) - limit(-1.0)


def l_residual(pair, x, xi, rel_step=1e-3):
    """Relative residual of L_x G_b(x, xi) at x != xi (five-point stencils).

    Normalized by |G''| + |2 G'/x| + |lambda x^-alpha G|.
    """
    x = float(x)
    h = rel_step * x
    if abs(x - xi) <= 2.5 * h:
        raise DomainError("x too close to the diagonal for the stencil")
    f = [green_eval(pair, x + s * h, xi) for s in (-2, -1, 0, 1, 2)]
    d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h)
    d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
    pot = pair.lam * x ** -pair.alpha * f[2]
    scale = abs(d2) + abs(2.0 * d1 / x) + abs(pot)
    return 0.0 if scale == 0.0 else (d2 + 2.0 * d1 / x - pot) / scale


def green_matrix(pair, x, xi):
    """Outer-product G_b(x_i, xi_j) for 1-D arrays, solution factors evaluated once per point."""
    x = _check_x(pair, np.atleast_1d(x))
    xi = _check_x(pair, np.atleast_1d(xi))
    m0x, e0x = u0_parts(pair, x)
    mbx, ebx = ub_parts(pair, x)
    m0s, e0s = u0_parts(pair, xi)
    mbs, ebs = ub_parts(pair, xi)
    below = x[:, None] <= xi[None, :]
    m = np.where(below, m0x[:, None] * mbs[None, :], mbx[:, None] * m0s[None, :])
    e = np.where(below, e0x[:, None] + ebs[None, :], ebx[:, None] + e0s[None, :])
    return (xi * xi)[None, :] / pair.c_constant * _combine(m, e)
