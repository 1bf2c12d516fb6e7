"""Changes of variable around a non-Fuchsian pole.

Two devices for -phi'' + (b/r^2 + a/r^p) phi = E phi and its oscillator
relative phi'' + (k^2 - mu^2 r^2 - l(l+1)/r^2 - S) phi = 0:

* rho = r^gamma with eps = 1/gamma, giving an equation whose zeroth-order
  coefficient tends to the Fuchsian form eps^2 (E - a - b)/rho^2 as eps -> 0;
* phi = A exp(B) exp(-mu r^2/2) with B' = sqrt(S), which trades the singular
  potential for first-order terms in the equation for A.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TransformSpec:
    a: float
    b_coef: float
    p: float
    energy: float
    epsilon: float

    def __post_init__(self):
        if not self.p > 2.0:
            raise DomainError(f"pole order p must exceed 2, got {self.p}")
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in (0, 1], got {self.epsilon}")

    def with_epsilon(self, eps):
        return replace(self, epsilon=float(eps))


def _rho(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise DomainError("rho must be positive")
    return rho


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def f_epsilon(spec, rho):
    """eps^2 (E rho^(2 eps) - a rho^((2-p) eps) - b)."""
    rho = _rho(rho)
    eps = spec.epsilon
    lr = np.log(rho)
    return _out(eps * eps * (spec.energy * np.exp(2.0 * eps * lr)
                             - spec.a * np.exp((2.0 - spec.p) * eps * lr) - spec.b_coef))


def f_first_order(spec, rho):
    """eps^2 [(E - a - b) + eps (2E - (2-p) a) log rho]."""
    rho = _rho(rho)
    eps = spec.epsilon
    lin = 2.0 * spec.energy - (2.0 - spec.p) * spec.a
    return _out(eps * eps * ((spec.energy - spec.a - spec.b_coef) + eps * lin * np.log(rho)))


def f_expansion_remainder(spec, rho):
    """F(eps) minus its two-term expansion; O(eps^4) at fixed rho, exactly 0 at rho = 1."""
    if spec.epsilon > 0.5:
        raise DomainError("expansion remainder is only meaningful for eps <= 0.5")
    rho = _rho(rho)
    lr = np.log(rho)
    eps = spec.epsilon
    # expm1 keeps the small differences E(rho^(2 eps) - 1 - 2 eps log rho) accurate
    x1 = 2.0 * eps * lr
    x2 = (2.0 - spec.p) * eps * lr
    rem = spec.energy * (np.expm1(x1) - x1) - spec.a * (np.expm1(x2) - x2)
    return _out(eps * eps * rem)


def transformed_coefficients(spec, rho):
    """(coefficient of d/drho, zeroth-order coefficient) after rho = r^gamma."""
    rho = _rho(rho)
    return _out((1.0 - spec.epsilon) / rho), _out(f_epsilon(spec, rho) / rho ** 2)


def fuchsian_limit_coefficients(spec, rho):
    """Coefficients of the limiting Fuchsian equation: (1-eps)/rho and eps^2 (E-a-b)/rho^2."""
    rho = _rho(rho)
    eps = spec.epsilon
    zeroth = eps * eps * (spec.energy - spec.a - spec.b_coef) / rho ** 2
    return _out((1.0 - eps) / rho), _out(zeroth)


def first_correction_coefficients(spec, rho):
    """Coefficients of the first non-Fuchsian correction (log rho term kept)."""
    rho = _rho(rho)
    return _out((1.0 - spec.epsilon) / rho), _out(f_first_order(spec, rho) / rho ** 2)


def original_coefficients(spec, r):
    """Coefficients of phi'' + (E - b/r^2 - a/r^p) phi = 0 in the r variable."""
    r = _rho(r)
    return _out(0.0 * r), _out(spec.energy - spec.b_coef / r ** 2 - spec.a * r ** -spec.p)


@dataclass(frozen=True)
class FactorizationSpec:
    mu: float
    k_sq: float
    l: int = 0
    a: float = 0.0
    p: float = 4.0
    branch: int = 1

    def __post_init__(self):
        if not self.mu > 0.0:
            raise DomainError("mu must be positive")
        if self.a < 0.0:
            raise DomainError("S = a/r^p with a < 0 needs a complex square root; not supported")
        if self.p == 2.0:
            raise DomainError("p = 2 gives a logarithmic B; not supported")
        if self.branch not in (1, -1):
            raise DomainError("branch must be +1 or -1")
        if int(self.l) != self.l or self.l < 0:
            raise DomainError("l must be a nonnegative integer")

    def s(self, r):
        return self.a * np.asarray(r, dtype=float) ** -self.p

    def sqrt_s(self, r):
        return self.branch * math.sqrt(self.a) * np.asarray(r, dtype=float) ** (-0.5 * self.p)

    def s_prime_over_2sqrt_s(self, r):
        # S'/(2 sqrt S) = B''; zero when S vanishes identically
        if self.a == 0.0:
            return 0.0 * np.asarray(r, dtype=float)
        r = np.asarray(r, dtype=float)
        return -0.5 * self.p * self.branch * math.sqrt(self.a) * r ** (-0.5 * self.p - 1.0)


def b_of_r(fact, r):
    """B(r) = branch * sqrt(a) r^(1 - p/2) / (1 - p/2), integration constant 0."""
    r = _rho(r)
    q = 1.0 - 0.5 * fact.p
    return _out(fact.branch * math.sqrt(fact.a) * r ** q / q)


def b_prime(fact, r):
    return _out(fact.sqrt_s(_rho(r)))


def a_equation_coefficients(fact, r):
    """(first-order, zeroth-order) coefficients of the equation for A."""
    r = _rho(r)
    sq = fact.sqrt_s(r)
    first = 2.0 * (sq - fact.mu * r)
    zeroth = (fact.k_sq - fact.mu - fact.l * (fact.l + 1) / r ** 2
              - 2.0 * fact.mu * r * sq + fact.s_prime_over_2sqrt_s(r))
    return first, zeroth


def _local_derivatives(grid, values, r, points=5):
    # value, first and second derivative at r from the polynomial through the nearest nodes
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.size < points:
        raise DomainError(f"need at least {points} samples around r")
    if not grid[0] <= r <= grid[-1]:
        raise DomainError("r must lie inside the sampled grid")
    idx = np.argsort(np.abs(grid - r))[:points]
    idx.sort()
    t = grid[idx] - r
    c = np.polyfit(t, values[idx], points - 1)
    return c[-1], c[-2], 2.0 * c[-3]


def factorization_residual(fact, grid, a_values, r):
    """Residuals of the A equation and of the original equation for phi = A e^B e^(-mu r^2/2).

    Returns ``(residual_a, residual_phi)``; algebraically
    residual_phi = residual_a * exp(B(r) - mu r^2 / 2).
    """
    grid = np.asarray(grid, dtype=float)
    a_values = np.asarray(a_values, dtype=float)
    r = float(r)
    a0, a1, a2 = _local_derivatives(grid, a_values, r)
    first, zeroth = a_equation_coefficients(fact, r)
    residual_a = a2 + first * a1 + zeroth * a0
    phi = a_values * np.exp(np.asarray(b_of_r(fact, grid)) - 0.5 * fact.mu * grid ** 2)
    p0, _, p2 = _local_derivatives(grid, phi, r)
    pot = fact.k_sq - fact.mu ** 2 * r * r - fact.l * (fact.l + 1) / (r * r) - float(fact.s(r))
    residual_phi = p2 + pot * p0
    return float(residual_a), float(residual_phi)


def march_a(fact, r0, r1, a0=1.0, da0=0.0, n_out=2001, rtol=1e-12):
    """Integrate the A equation from r0 to r1; returns ``(r, A, A')`` on a uniform output grid."""
    from scipy.integrate import solve_ivp

    def rhs(r, y):
        first, zeroth = a_equation_coefficients(fact, r)
        return [y[1], -first * y[1] - zeroth * y[0]]

    r = np.linspace(r0, r1, n_out)
    sol = solve_ivp(rhs, (r0, r1), [a0, da0], t_eval=r, rtol=rtol, atol=1e-14, method="DOP853")
    if not sol.success:
        from .errors import NumericalFailure
        raise NumericalFailure(f"A-equation integration failed: {sol.message}")
    return r, sol.y[0], sol.y[1]


def phi_residual_on_grid(fact, r, phi):
    """Relative residual of phi'' + (k^2 - mu^2 r^2 - l(l+1)/r^2 - S) phi at interior nodes (5-point)."""
    h = r[1] - r[0]
    d2 = (-phi[:-4] + 16 * phi[1:-3] - 30 * phi[2:-2] + 16 * phi[3:-1] - phi[4:]) / (12 * h * h)
    rc = r[2:-2]
    pot = fact.k_sq - fact.mu ** 2 * rc ** 2 - fact.l * (fact.l + 1) / rc ** 2 - fact.s(rc)
    res = d2 + pot * phi[2:-2]
    scale = np.abs(d2) + np.abs(pot * phi[2:-2])
    return rc, res / np.where(scale == 0.0, 1.0, scale)
