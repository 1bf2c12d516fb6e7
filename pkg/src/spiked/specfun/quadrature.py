"""Gauss-Legendre nodes and weights by Newton iteration on P_n."""
import numpy as np

from ..errors import DomainError

N_MAX = 4096


def _legendre_with_derivative(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(n, a=-1.0, b=1.0):
    """Return ``(nodes, weights)`` of the n-point rule on (a, b), nodes ascending."""
    n = int(n)
    if n < 2 or n > N_MAX:
        raise DomainError(f"Gauss-Legendre order must lie in [2, {N_MAX}], got {n}")
    if not b > a:
        raise DomainError("need b > a")
    m = (n + 1) // 2
    k = np.arange(1, m + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    p, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if n % 2:
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    half = 0.5 * (b - a)
    return a + half * (nodes + 1.0), half * weights
