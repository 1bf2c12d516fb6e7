"""Spiked-oscillator potentials and reference Dirichlet spectra by finite differences."""
import math
from dataclasses import dataclass, field

import numpy as np

from ._sturm import count_below, lowest_eigenvalues
from .errors import DomainError, NumericalFailure

DEFAULT_X_MAX = 12.0
BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class PotentialSpec:
    """Parameters of x^2 + l(l+1)/x^2 + lambda (x^-alpha + kappa x)."""

    alpha: float
    lam: float = 0.0
    kappa: float = 0.0
    l: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 2.0):
            raise DomainError(f"alpha must exceed 2, got {self.alpha}")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if not math.isfinite(self.kappa):
            raise DomainError("kappa must be finite")
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a nonnegative integer, got {self.l}")


@dataclass(frozen=True)
class RadialGrid:
    """Interior nodes x_j = j h, j = 1..n, with h = x_max/(n+1)."""

    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > 0.0:
            raise DomainError("x_max must be positive")
        if int(self.n) != self.n or self.n < 16:
            raise DomainError(f"grid needs at least 16 interior nodes, got {self.n}")

    @property
    def h(self):
        return self.x_max / (self.n + 1)

    @property
    def nodes(self):
        return self.h * np.arange(1, self.n + 1)

    def refined(self):
        """Grid with exactly half the spacing on the same interval."""
        return RadialGrid(self.x_max, 2 * self.n + 1)


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    grid: RadialGrid
    extrapolated: bool = False
    raw: dict = field(default_factory=dict)


def potential_eval(spec, x):
    """x^2 + l(l+1)/x^2 + lambda*(x^-alpha + kappa*x) for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("potential is defined for x > 0 only")
    v = x * x
    if spec.l:
        v = v + spec.l * (spec.l + 1) / (x * x)
    if spec.lam:
        v = v + spec.lam * (x ** -spec.alpha + spec.kappa * x)
    return float(v) if v.ndim == 0 else v


def _raw_spectrum(spec, grid, k, backend=None):
    h = grid.h
    diag = 2.0 / (h * h) + potential_eval(spec, grid.nodes)
    off2 = np.full(grid.n - 1, 1.0 / h ** 4)
    lo = float(np.min(diag)) - 2.0 / (h * h)
    safeguard = float(np.max(diag)) + 2.0 / (h * h)
    # smallest power-of-two multiple of a modest guess that traps k levels
    hi = max(lo + 1.0, 4.0 * k + 3.0)
    while count_below(diag, off2, hi) < k:
        if hi >= safeguard:
            raise NumericalFailure(
                f"bisection could not bracket {k} eigenvalues below {safeguard:.6g}")
        hi = min(2.0 * hi + 1.0, safeguard * (1.0 + 1e-12) + 1.0)
    return lowest_eigenvalues(diag, off2, k, lo, hi, BISECTION_TOL, backend=backend)


def richardson(e_coarse, e_fine, h_coarse, h_fine, order=2):
    """Cancel the leading h^order term from two grid results."""
    rc = h_coarse ** order
    rf = h_fine ** order
    return (rc * e_fine - rf * e_coarse) / (rc - rf)


def exact_spectrum(spec, grid, k, extrapolate=False, backend=None):
    """k lowest Dirichlet eigenvalues of -d^2/dx^2 + V on (0, x_max).

    Three-point differences and Sturm bisection; with ``extrapolate`` the grid
    with half the spacing is also solved and the O(h^2) term removed.
    """
    k = int(k)
    if k < 1 or k > grid.n // 4:
        raise DomainError(f"k must lie in [1, n/4] = [1, {grid.n // 4}], got {k}")
    if spec.kappa < 0.0 and spec.lam > 0.0:
        raise DomainError("kappa < 0 makes the potential unbounded below; refused")
    coarse = _raw_spectrum(spec, grid, k, backend)
    if not extrapolate:
        return SpectrumResult(coarse, grid, False, {"coarse": coarse})
    fine_grid = grid.refined()
    fine = _raw_spectrum(spec, fine_grid, k, backend)
    ext = richardson(coarse, fine, grid.h, fine_grid.h)
    return SpectrumResult(ext, grid, True, {"coarse": coarse, "fine": fine})


def convergence_study(spec, k, grids):
    """Eigenvalue k (1-based) on each grid plus the observed order log2 of difference ratios.

    Returns ``(rows, orders)`` with rows ``(h, E_k)`` and one order estimate per
    consecutive triple of grids.
    """
    grids = list(grids)
    if len(grids) < 3:
        raise DomainError("convergence study needs at least three grids")
    rows = []
    for g in grids:
        e = _raw_spectrum(spec, g, k)[k - 1]
        rows.append((g.h, float(e)))
    orders = []
    for (h0, e0), (h1, e1), (h2, e2) in zip(rows, rows[1:], rows[2:]):
        d1 = e0 - e1
        d2 = e1 - e2
        orders.append(math.log(abs(d1 / d2)) / math.log(h0 / h1) if d2 != 0.0 else math.inf)
    return rows, orders
