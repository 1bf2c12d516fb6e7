import numpy as np
import pytest

from spiked.errors import DomainError, NumericalFailure
from spiked.fredholm import (
    build_nystrom,
    characteristic_values,
    characteristic_values_oracle,
    composite_nodes,
    continuous_residual,
    interpolate_w,
    neumann_series,
    solve_w,
    solvability_defect,
    transposed_null_function,
)
from spiked.harrell import w_alpha
from spiked.oscillator import PotentialSpec

SPEC = PotentialSpec(alpha=4.0, lam=1.0, kappa=0.1)


@pytest.fixture(scope="module")
def op128():
    return build_nystrom(SPEC, 10.0, 128)


@pytest.fixture(scope="module")
def op256():
    return build_nystrom(SPEC, 10.0, 256)


def test_composite_nodes_integrate_polynomials():
    x, w = composite_nodes(10.0, 64, 16)
    assert np.all(np.diff(x) > 0)
    assert np.dot(w, x ** 7) == pytest.approx(10.0 ** 8 / 8, rel=1e-14)


def test_kappa_zero_is_trial_weight(op128):
    w = solve_w(op128, 0.0)
    assert np.max(np.abs(w - w_alpha(4.0, 1.0, op128.nodes))) < 1e-12


def test_n_doubling(op128, op256):
    probes = np.linspace(0.2, 9.8, 25)
    w1 = interpolate_w(op128, solve_w(op128, 0.1), probes, 0.1)
    w2 = interpolate_w(op256, solve_w(op256, 0.1), probes, 0.1)
    assert np.max(np.abs(w1 - w2)) < 1e-6


def test_interpolant_reproduces_nodes(op128):
    w = solve_w(op128, 0.1)
    assert np.max(np.abs(interpolate_w(op128, w, op128.nodes, 0.1) - w)) < 1e-12


def test_continuous_equation_residual(op256):
    w = solve_w(op256, 0.1)
    res = continuous_residual(op256, w, np.array([0.7, 2.3, 6.1]), 0.1)
    assert np.max(np.abs(res)) < 1e-8


def test_neumann_within_bound(op128):
    kappa = 0.01
    norm = abs(kappa) * np.linalg.norm(op128.matrix, np.inf)
    assert norm < 1
    w = solve_w(op128, kappa)
    f = op128.hom_term
    for terms in (3, 6, 11):
        s = neumann_series(op128, kappa, terms=terms)
        bound = norm ** terms / (1 - norm) * np.max(np.abs(f))
        assert np.max(np.abs(w - s)) <= bound * (1 + 1e-9) + 1e-15


def test_characteristic_values_match_eigenvalues(op128):
    found = characteristic_values(op128, -1.0, -0.01)
    oracle = characteristic_values_oracle(op128, -1.0, -0.01)
    assert len(found) == len(oracle) > 0
    assert np.max(np.abs(np.array([c.kappa for c in found]) - oracle)) < 1e-6


def test_transposed_null_function(op128):
    kstar = characteristic_values(op128, -1.0, -0.5)[0].kappa
    chi, smin = transposed_null_function(op128, kstar)
    assert np.dot(op128.weights, chi ** 2) == pytest.approx(1.0)
    y = op128.weights * chi
    # y^T (I - kappa* K) = 0 up to the bisection tolerance
    assert np.max(np.abs(y - kstar * (op128.matrix.T @ y))) < 1e-6 * np.max(np.abs(y))
    assert np.isfinite(solvability_defect(op128, kstar))


def test_near_singular_raises(op128):
    kstar = float(characteristic_values_oracle(op128, -1.0, -0.5)[0])
    with pytest.raises(NumericalFailure, match="characteristic value"):
        solve_w(op128, kstar)


def test_validation():
    with pytest.raises(DomainError):
        build_nystrom(SPEC, 10.0, 16)
    with pytest.raises(DomainError):
        build_nystrom(PotentialSpec(alpha=4.0), 10.0, 64)
