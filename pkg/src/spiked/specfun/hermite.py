"""Harmonic-oscillator eigenfunctions of -d^2/dx^2 + x^2 via the Hermite recurrence."""
import math

import numpy as np

from ..errors import DomainError

N_MAX = 20


def _table(n, x):
    # rows 0..n+1 so derivatives of row n are available
    x = np.asarray(x, dtype=float)
    psi = np.empty((n + 2,) + x.shape)
    psi[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    psi[1] = math.sqrt(2.0) * x * psi[0]
    for m in range(1, n + 1):
        psi[m + 1] = math.sqrt(2.0 / (m + 1)) * x * psi[m] - math.sqrt(m / (m + 1)) * psi[m - 1]
    return psi


def oscillator_eigenfunction(n, x, derivative=False):
    """Full-line normalized eigenfunction psi_n(x), eigenvalue 2n + 1.

    With ``derivative=True`` returns ``(psi_n, psi_n')`` using
    psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}.
    """
    n = int(n)
    if n < 0 or n > N_MAX:
        raise DomainError(f"state index must lie in [0, {N_MAX}], got {n}")
    psi = _table(n, x)
    val = psi[n]
    if not derivative:
        return val if val.ndim else float(val)
    lower = psi[n - 1] if n > 0 else 0.0 * val
    d = math.sqrt(n / 2.0) * lower - math.sqrt((n + 1) / 2.0) * psi[n + 1]
    if val.ndim:
        return val, d
    return float(val), float(d)


class HalfLineState:
    """Odd oscillator state rescaled to unit norm on [0, inf); vanishes at 0."""

    def __init__(self, i):
        i = int(i)
        if i % 2 == 0 or i < 1 or i > 19:
            raise DomainError(f"half-line states need odd i in [1, 19], got {i}")
        self.i = i
        self.norm = math.sqrt(2.0)
        self.energy = 2.0 * i + 1.0

    def __call__(self, x):
        return self.norm * oscillator_eigenfunction(self.i, x)

    def derivative(self, x):
        return self.norm * oscillator_eigenfunction(self.i, x, derivative=True)[1]

    def second_derivative(self, x):
        # from the eigenvalue equation u'' = (x^2 - E) u
        x = np.asarray(x, dtype=float)
        return (x * x - self.energy) * self(x)


def half_line_state(i):
    """Return the :class:`HalfLineState` for odd ``i`` (callable; ``.norm`` is sqrt(2))."""
    return HalfLineState(i)
