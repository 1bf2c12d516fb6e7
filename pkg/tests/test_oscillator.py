import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spiked._sturm import count_below, lowest_eigenvalues
from spiked.errors import DomainError
from spiked.oscillator import (
    PotentialSpec,
    RadialGrid,
    convergence_study,
    exact_spectrum,
    potential_eval,
    richardson,
)


def test_unperturbed_levels():
    res = exact_spectrum(PotentialSpec(alpha=4.0), RadialGrid(12.0, 2000), 3, extrapolate=True)
    assert np.max(np.abs(res.eigenvalues - [3.0, 7.0, 11.0])) < 1e-8
    assert res.extrapolated


def test_centrifugal_ground_state():
    # l = 1 ground level of the radial oscillator is 2(0) + 2l + 3 = 5
    res = exact_spectrum(PotentialSpec(alpha=4.0, l=1), RadialGrid(12.0, 2000), 1, extrapolate=True)
    assert res.eigenvalues[0] == pytest.approx(5.0, abs=1e-8)


def test_convergence_order_two():
    grids = [RadialGrid(10.0, n) for n in (200, 401, 803)]
    rows, orders = convergence_study(PotentialSpec(alpha=4.0, lam=0.1), 1, grids)
    assert len(rows) == 3
    assert orders[0] == pytest.approx(2.0, abs=0.05)


def test_richardson_cancels_h2():
    # E(h) = 3 + 5 h^2
    assert richardson(3 + 5 * 0.04, 3 + 5 * 0.01, 0.2, 0.1) == pytest.approx(3.0, abs=1e-14)


def test_spike_raises_levels_monotonically():
    grid = RadialGrid(10.0, 1000)
    prev = None
    for lam in (0.0, 0.01, 0.1, 1.0):
        e = exact_spectrum(PotentialSpec(alpha=4.0, lam=lam), grid, 2).eigenvalues
        if prev is not None:
            assert np.all(e > prev)
        prev = e


def test_small_lambda_first_order():
    lam = 1e-3
    e = exact_spectrum(PotentialSpec(alpha=4.0, lam=lam), RadialGrid(10.0, 40000), 1,
                       extrapolate=True).eigenvalues[0]
    first = 3.0 + 2.2567583341910251 * np.sqrt(lam)
    assert abs(e - first) <= 5 * lam


def test_potential_eval():
    spec = PotentialSpec(alpha=4.0, lam=2.0, kappa=0.5, l=1)
    assert potential_eval(spec, 2.0) == pytest.approx(4 + 0.5 + 2 * (1 / 16 + 1.0))
    with pytest.raises(DomainError):
        potential_eval(spec, 0.0)


def test_validation():
    with pytest.raises(DomainError):
        PotentialSpec(alpha=2.0)
    with pytest.raises(DomainError):
        PotentialSpec(alpha=4.0, lam=-1.0)
    with pytest.raises(DomainError):
        PotentialSpec(alpha=4.0, l=1.5)
    with pytest.raises(DomainError):
        exact_spectrum(PotentialSpec(alpha=4.0), RadialGrid(10.0, 40), 11)
    with pytest.raises(DomainError):
        exact_spectrum(PotentialSpec(alpha=4.0, lam=1.0, kappa=-1.0), RadialGrid(10.0, 400), 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(20, 120), st.integers(1, 5), st.integers(0, 2**31 - 1))
def test_sturm_matches_eigvalsh(n, k, seed):
    rng = np.random.default_rng(seed)
    diag = rng.normal(size=n) * 3
    off = rng.normal(size=n - 1)
    mat = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    ref = np.linalg.eigvalsh(mat)[:k]
    bound = np.max(np.abs(diag)) + 2 * np.max(np.abs(off)) + 1
    for backend in ("numba", "numpy"):
        got = lowest_eigenvalues(diag, off * off, k, -bound, bound, 1e-13, backend=backend)
        assert np.max(np.abs(got - ref)) < 1e-10
    assert count_below(diag, off * off, ref[k - 1] + 1e-9) >= k


def test_numpy_fallback_by_env_flag():
    code = ("from spiked._accel import USE_NUMBA; from spiked import *;"
            "r = exact_spectrum(PotentialSpec(alpha=4.0, lam=0.1), RadialGrid(10.0, 400), 2);"
            "print(USE_NUMBA, repr(list(r.eigenvalues)))")
    env = dict(os.environ, SPIKED_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split(" ", 1)
    assert out[0] == "False"
    ref = exact_spectrum(PotentialSpec(alpha=4.0, lam=0.1), RadialGrid(10.0, 400), 2).eigenvalues
    assert np.max(np.abs(np.array(eval(out[1])) - ref)) < 1e-11
