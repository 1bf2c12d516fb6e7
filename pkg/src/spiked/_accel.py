"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python and wrapped with
:func:`jit`. Set ``SPIKED_DISABLE_NUMBA=1`` to run them as plain Python; the
Sturm-count kernel additionally has a vectorized numpy path used in that mode.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

_FLAG = os.environ.get("SPIKED_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def jit(fn):
    """``numba.njit(cache=True)`` when acceleration is enabled, identity otherwise."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
