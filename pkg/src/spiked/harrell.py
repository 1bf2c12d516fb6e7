"""Trial weights W_alpha and the small-lambda eigenvalue expansion.

W_alpha(x; lambda) = (2 nu^nu lambda^(nu/2) / Gamma(nu)) x^(-1/2) K_nu(2 nu sqrt(lambda) x^(-1/(2 nu)))
with nu = 1/(alpha - 2) solves W'' + (2/x) W' - lambda x^-alpha W = 0; for
alpha = 4 it is exp(-sqrt(lambda)/x).
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import gamma, gauss_legendre, half_line_state, ik_scaled_array

UNDERFLOW_EXPONENT = -700.0
MATRIX_ELEMENT_X_MAX = 12.0
MATRIX_ELEMENT_NODES = 400


@dataclass(frozen=True)
class ExpansionResult:
    e0: float
    coefficient: float
    exponent: float
    order_estimate: float = math.nan

    def value(self, lam):
        return self.e0 + self.coefficient * lam ** self.exponent


def bessel_argument(nu, lam, x):
    """z(x) = 2 nu sqrt(lambda) x^(-1/(2 nu))."""
    return 2.0 * nu * math.sqrt(lam) * np.asarray(x, dtype=float) ** (-0.5 / nu)


def w_prefactor(nu, lam):
    return 2.0 * nu ** nu * lam ** (0.5 * nu) / gamma(nu)


def _check_alpha(alpha):
    if not alpha >= 4.0:
        raise DomainError(f"the expansion is restricted to alpha >= 4, got {alpha}")


def w_alpha(alpha, lam, x):
    """Trial weight W_alpha(x; lambda) with N(lambda) = 1; scalar or array x > 0."""
    _check_alpha(alpha)
    if not lam > 0.0:
        raise DomainError("w_alpha needs lambda > 0")
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("w_alpha needs x > 0")
    nu = 1.0 / (alpha - 2.0)
    z = bessel_argument(nu, lam, x)
    out = np.zeros_like(z)
    live = -z > UNDERFLOW_EXPONENT
    if np.any(live):
        k_scaled = ik_scaled_array(nu, z[live])[1]
        out[live] = w_prefactor(nu, lam) * x[live] ** -0.5 * k_scaled * np.exp(-z[live])
    return float(out) if out.ndim == 0 else out


def w_ode_residual(alpha, lam, x, w=None):
    """W'' + (2/x) W' - lambda x^-alpha W by central differences, step 1e-4 x.

    ``w`` overrides the function under test (defaults to :func:`w_alpha`).
    """
    if w is None:
        def w(t):
            return w_alpha(alpha, lam, t)
    x = float(x)
    h = 1e-4 * x
    wm, w0, wp = w(x - h), w(x), w(x + h)
    d2 = (wp - 2.0 * w0 + wm) / (h * h)
    d1 = (wp - wm) / (2.0 * h)
    return d2 + 2.0 / x * d1 - lam * x ** -alpha * w0


def _d1_d2(f, x, h):
    # five-point central stencils
    fm2, fm1, f0, fp1, fp2 = (f(x + s * h) for s in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return d1, d2


def operator_identity_sides(i, alpha, lam, x):
    """Both sides of [H0 - E_i + lambda x^-alpha] W u_i = 2 W' (1/x - d/dx) u_i."""
    u = half_line_state(i)
    x = float(x)
    h = 1e-3 * x

    def w(t):
        return w_alpha(alpha, lam, t)

    def wu(t):
        return w(t) * u(t)

    _, d2 = _d1_d2(wu, x, h)
    dw, _ = _d1_d2(w, x, h)
    lhs = -d2 + (x * x - u.energy + lam * x ** -alpha) * wu(x)
    rhs = 2.0 * dw * (u(x) / x - u.derivative(x))
    return lhs, rhs


def operator_identity_residual(i, alpha, lam, x):
    """(lhs - rhs) / max(|lhs|, |rhs|) for the weighted operator identity."""
    lhs, rhs = operator_identity_sides(i, alpha, lam, x)
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else (lhs - rhs) / scale


def matrix_element(i, normalization="half_line", n=MATRIX_ELEMENT_NODES):
    """(u_i, x^-2 (1/x - d/dx) u_i) on [0, inf) by Gauss-Legendre on (0, 12).

    ``normalization="full_line"`` uses the full-line normalized odd state,
    which is the half-line value divided by 2.
    """
    u = half_line_state(i)
    x, wts = gauss_legendre(n, 0.0, MATRIX_ELEMENT_X_MAX)
    ux = u(x)
    integrand = ux * (ux / x - u.derivative(x)) / (x * x)
    val = float(np.dot(wts, integrand))
    if normalization == "half_line":
        return val
    if normalization == "full_line":
        return 0.5 * val
    raise ValueError(f"unknown normalization {normalization!r}")


def coefficient_sqrt_route(i, normalization="half_line"):
    """Coefficient of sqrt(lambda) for alpha = 4: 2 (u_i, x^-2 (1/x - d/dx) u_i)."""
    return 2.0 * matrix_element(i, normalization)


def coefficient_general_route(i, alpha, normalization="half_line"):
    """2 Gamma(1-nu)/Gamma(1+nu) nu^(2 nu) (u_i, x^-2 (1/x - d/dx) u_i)."""
    _check_alpha(alpha)
    nu = 1.0 / (alpha - 2.0)
    return 2.0 * gamma(1.0 - nu) / gamma(1.0 + nu) * nu ** (2.0 * nu) * matrix_element(i, normalization)


def energy_expansion(i, alpha, lam, normalization="half_line"):
    """Leading small-lambda expansion E_i(0) + c lambda^nu; returns ``(result, value)``."""
    _check_alpha(alpha)
    if lam < 0.0:
        raise DomainError("lambda must be >= 0")
    if lam > 0.5:
        warnings.warn(f"lambda = {lam} is outside the small-coupling regime", stacklevel=2)
    nu = 1.0 / (alpha - 2.0)
    coef = coefficient_general_route(i, alpha, normalization)
    res = ExpansionResult(e0=2.0 * i + 1.0, coefficient=coef, exponent=nu)
    return res, res.value(lam)


def remainder_order(lams, exact, expansion):
    """Slope of log|exact - expansion| against log(lambda) by least squares."""
    lams = np.asarray(lams, dtype=float)
    diff = np.abs(np.asarray(exact, dtype=float) - np.asarray(expansion, dtype=float))
    slope, _ = np.polyfit(np.log(lams), np.log(diff), 1)
    return float(slope)
