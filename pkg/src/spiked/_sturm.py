"""Sturm-sequence bisection for the lowest eigenvalues of a symmetric tridiagonal matrix.

The matrix is given by its diagonal and the squares of its off-diagonal. Two
backends share one contract: a numba kernel that bisects eigenvalue by
eigenvalue while sharing brackets, and a numpy kernel that bisects all k
brackets at once with the count loop vectorized across shifts.
"""
import numpy as np

from ._accel import USE_NUMBA, jit


@jit
def _count_below(diag, off2, sigma):
    # number of eigenvalues strictly below sigma (LDL^T inertia)
    tiny = 1e-300
    count = 0
    q = diag[0] - sigma
    if q < 0.0:
        count += 1
    for j in range(1, diag.shape[0]):
        if q == 0.0:
            q = tiny
        q = diag[j] - sigma - off2[j - 1] / q
        if q < 0.0:
            count += 1
    return count


@jit
def _bisect_numba(diag, off2, k, lo, hi, tol):
    lo_b = np.full(k, lo)
    hi_b = np.full(k, hi)
    out = np.empty(k)
    for m in range(k):
        a = lo_b[m]
        b = hi_b[m]
        while b - a > tol + 2.2e-16 * max(abs(a), abs(b)):
            mid = 0.5 * (a + b)
            c = _count_below(diag, off2, mid)
            for j in range(m, k):
                if j < c:
                    if mid < hi_b[j]:
                        hi_b[j] = mid
                elif mid > lo_b[j]:
                    lo_b[j] = mid
            if c > m:
                b = mid
            else:
                a = mid
        out[m] = 0.5 * (a + b)
    return out


def _counts_numpy(diag, off2, sigmas):
    tiny = 1e-300
    q = diag[0] - sigmas
    count = (q < 0.0).astype(np.int64)
    for j in range(1, diag.shape[0]):
        q = np.where(q == 0.0, tiny, q)
        q = diag[j] - sigmas - off2[j - 1] / q
        count += q < 0.0
    return count


def _bisect_numpy(diag, off2, k, lo, hi, tol):
    a = np.full(k, float(lo))
    b = np.full(k, float(hi))
    idx = np.arange(k)
    while True:
        width = b - a
        active = width > tol + 2.2e-16 * np.maximum(np.abs(a), np.abs(b))
        if not active.any():
            break
        mid = 0.5 * (a + b)
        c = _counts_numpy(diag, off2, mid)
        upper = c > idx
        b = np.where(active & upper, mid, b)
        a = np.where(active & ~upper, mid, a)
    return 0.5 * (a + b)


def count_below(diag, off2, sigma):
    diag = np.ascontiguousarray(diag, dtype=float)
    off2 = np.ascontiguousarray(off2, dtype=float)
    if USE_NUMBA:
        return int(_count_below(diag, off2, float(sigma)))
    return int(_counts_numpy(diag, off2, np.array([float(sigma)]))[0])


def lowest_eigenvalues(diag, off2, k, lo, hi, tol=1e-12, backend=None):
    """k lowest eigenvalues inside the bracket [lo, hi].

    ``backend`` is ``"numba"``, ``"numpy"`` or None (follow the env flag).
    The caller guarantees at least k eigenvalues below ``hi``.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off2 = np.ascontiguousarray(off2, dtype=float)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if backend == "numba":
        return _bisect_numba(diag, off2, int(k), float(lo), float(hi), float(tol))
    if backend == "numpy":
        return _bisect_numpy(diag, off2, int(k), float(lo), float(hi), float(tol))
    raise ValueError(f"unknown backend {backend!r}")
