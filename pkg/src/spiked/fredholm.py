"""Nystrom discretization of the integral equation for W_alpha with the linear term.

    W(x) = gamma u0(x) + kappa * lambda * int_0^b G_b(x, xi) xi W(xi) dxi

Nodes are composite Gauss-Legendre panels on (0, b). G_b has a derivative kink
on the diagonal, so on the panel holding the evaluation point the integral is
split there and integrated against the panel's Lagrange basis (product
integration); every other entry is the plain ``w_j * lambda * xi_j * G_b(x_i, xi_j)``.
The discrete equation reads (I - kappa K) w = gamma u0.
"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericalFailure
from .green import HomSolutionPair, green_matrix, make_pair, u0_eval
from .specfun import gauss_legendre

COND_LIMIT = 1e12
N_RANGE = (32, 2048)
PANEL_ORDER = 16


@dataclass(frozen=True)
class KernelOperator:
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray
    hom_term: np.ndarray
    pair: HomSolutionPair
    b: float
    n: int
    panel_order: int

    @property
    def lam(self):
        return self.pair.lam

    @property
    def edges(self):
        return np.linspace(0.0, self.b, self.n // self.panel_order + 1)


def kernel_values(pair, x, xi):
    """lambda * xi * G_b(x, xi) on the outer grid of 1-D ``x`` and ``xi``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return pair.lam * xi[None, :] * green_matrix(pair, x, xi)


def composite_nodes(b, n, p):
    """Gauss-Legendre nodes/weights on n // p equal panels of (0, b)."""
    edges = np.linspace(0.0, b, n // p + 1)
    t, w = gauss_legendre(p)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return x, wt


def _barycentric_weights(nodes):
    d = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(d, 1.0)
    return 1.0 / np.prod(d, axis=1)


def _lagrange_matrix(nodes, bw, s):
    """L[q, j] = l_j(s_q) for the interpolating polynomial through ``nodes``."""
    diff = s[:, None] - nodes[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = bw[None, :] / diff
    out = terms / terms.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    out[rows] = exact[rows].astype(float)
    return out


def _panel_order(n):
    if n % PANEL_ORDER == 0:
        return PANEL_ORDER
    for p in range(24, 7, -1):
        if n % p == 0:
            return p
    return n


def _rows(pair, x_eval, nodes, weights, edges, p, bw, t_split, w_split):
    """Quadrature rows R[i, j] with (K W)(x_i) ~ sum_j R[i, j] W(xi_j)."""
    x_eval = np.atleast_1d(np.asarray(x_eval, dtype=float))
    rows = kernel_values(pair, x_eval, nodes) * weights[None, :]
    panel = np.clip(np.searchsorted(edges, x_eval, side="right") - 1, 0, len(edges) - 2)
    for i, (xe, k) in enumerate(zip(x_eval, panel)):
        a, c = edges[k], edges[k + 1]
        sl = slice(k * p, (k + 1) * p)
        local = np.zeros(p)
        for lo, hi in ((a, xe), (xe, c)):
            if hi <= lo:
                continue
            s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t_split
            ws = 0.5 * (hi - lo) * w_split
            kv = kernel_values(pair, np.array([xe]), s)[0]
            local += (ws * kv) @ _lagrange_matrix(nodes[sl], bw[sl], s)
        rows[i, sl] = local
    return rows


def _quadrature_rows(op, x_eval):
    t, w = gauss_legendre(2 * op.panel_order)
    sl_bw = np.concatenate([
        _barycentric_weights(op.nodes[k * op.panel_order:(k + 1) * op.panel_order])
        for k in range(op.n // op.panel_order)])
    return _rows(op.pair, x_eval, op.nodes, op.weights, op.edges, op.panel_order, sl_bw, t, w)


def build_nystrom(spec, b, n):
    """Assemble the kernel matrix and the homogeneous term for ``spec`` on (0, b)."""
    n = int(n)
    if not N_RANGE[0] <= n <= N_RANGE[1]:
        raise DomainError(f"quadrature size must lie in {list(N_RANGE)}, got {n}")
    if not spec.lam > 0.0:
        raise DomainError("the integral equation needs lambda > 0")
    if not math.isfinite(spec.kappa):
        raise DomainError("kappa must be finite")
    pair = make_pair(spec.alpha, spec.lam, b)
    p = _panel_order(n)
    x, w = composite_nodes(b, n, p)
    stub = KernelOperator(nodes=x, weights=w, matrix=None, hom_term=None, pair=pair,
                          b=float(b), n=n, panel_order=p)
    mat = _quadrature_rows(stub, x)
    if not np.all(np.isfinite(mat)):
        raise NumericalFailure("non-finite kernel entries")
    return KernelOperator(nodes=x, weights=w, matrix=mat, hom_term=u0_eval(pair, x),
                          pair=pair, b=float(b), n=n, panel_order=p)


def _system(op, kappa):
    return np.eye(op.n) - kappa * op.matrix


def nearest_characteristic_value(op, kappa):
    ev = np.linalg.eigvals(op.matrix)
    ev = ev[np.abs(ev) > 1e-300]
    cands = 1.0 / ev
    return complex(cands[np.argmin(np.abs(cands - kappa))])


def solve_w(op, kappa, gamma_coef=1.0, rhs=None):
    """Nodal W solving (I - kappa K) w = gamma * hom_term (or ``rhs``) by LU with one refinement step."""
    a = _system(op, kappa)
    f = gamma_coef * op.hom_term if rhs is None else np.asarray(rhs, dtype=float)
    lu = scipy.linalg.lu_factor(a)
    cond = np.linalg.cond(a, 1)
    if not cond < COND_LIMIT:
        near = nearest_characteristic_value(op, kappa)
        raise NumericalFailure(
            f"(I - kappa K) is near-singular at kappa={kappa}: cond={cond:.3e}, "
            f"nearest characteristic value {near.real:.10g}")
    w = scipy.linalg.lu_solve(lu, f)
    w += scipy.linalg.lu_solve(lu, f - a @ w)
    return w


def interpolate_w(op, w, x, kappa, gamma_coef=1.0):
    """Nystrom interpolant W(x) = gamma u0(x) + kappa sum_j K_j(x) w_j at arbitrary x in (0, b]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return gamma_coef * u0_eval(op.pair, x) + kappa * (_quadrature_rows(op, x) @ w)


def continuous_residual(op, w, x, kappa, gamma_coef=1.0, n_fine=400):
    """Residual of the continuous equation at off-node points.

    The integral is re-evaluated by Gauss-Legendre split at x (so each piece
    is smooth), with W supplied by the Nystrom interpolant.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for m, xm in enumerate(x):
        total = 0.0
        for a, b in ((0.0, xm), (xm, op.b)):
            s, sw = gauss_legendre(n_fine, a, b)
            ws = interpolate_w(op, w, s, kappa, gamma_coef)
            total += np.dot(sw, kernel_values(op.pair, np.array([xm]), s)[0] * ws)
        wx = interpolate_w(op, w, xm, kappa, gamma_coef)[0]
        out[m] = wx - gamma_coef * u0_eval(op.pair, xm) - kappa * total
    return out


def neumann_series(op, kappa, gamma_coef=1.0, terms=11):
    """sum_{m < terms} (kappa K)^m gamma hom_term."""
    term = gamma_coef * op.hom_term
    total = term.copy()
    for _ in range(terms - 1):
        term = kappa * (op.matrix @ term)
        total += term
    return total


def _det_sign(op, kappa):
    sign, _ = np.linalg.slogdet(_system(op, kappa))
    return sign


@dataclass(frozen=True)
class CharacteristicValue:
    kappa: float
    chi: np.ndarray  # transposed-kernel null function on the nodes, unit weighted L2 norm
    sigma_min: float


def transposed_null_function(op, kappa):
    """chi on the nodes with chi = kappa K^T chi in the continuous sense, sum w chi^2 = 1.

    A left null vector y of (I - kappa K) equals w * chi for the weighted Nystrom matrix.
    """
    u, s, _ = np.linalg.svd(_system(op, kappa))
    y = u[:, -1]
    chi = y / op.weights
    chi /= math.sqrt(np.dot(op.weights, chi * chi))
    # fix the sign so the largest-magnitude entry is positive
    if chi[np.argmax(np.abs(chi))] < 0.0:
        chi = -chi
    return chi, float(s[-1])


def characteristic_values(op, lo, hi, scan_points=400, tol=1e-8):
    """Characteristic values kappa* in [lo, hi]: sign changes of det(I - kappa K), bisected to tol."""
    if not hi > lo:
        raise DomainError("need hi > lo")
    grid = np.linspace(lo, hi, scan_points)
    signs = np.array([_det_sign(op, k) for k in grid])
    found = []
    for j in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        a, b, sa = grid[j], grid[j + 1], signs[j]
        while b - a > tol * max(1.0, abs(a)):
            mid = 0.5 * (a + b)
            sm = _det_sign(op, mid)
            if sm == sa:
                a = mid
            else:
                b = mid
        kstar = 0.5 * (a + b)
        chi, smin = transposed_null_function(op, kstar)
        found.append(CharacteristicValue(kappa=float(kstar), chi=chi, sigma_min=smin))
    return found


def characteristic_values_oracle(op, lo, hi):
    """Reciprocals of the real kernel-matrix eigenvalues that fall in [lo, hi]."""
    ev = np.linalg.eigvals(op.matrix)
    ev = ev[(np.abs(ev.imag) <= 1e-10 * np.abs(ev)) & (ev.real != 0.0)].real
    k = np.sort(1.0 / ev)
    return k[(k >= lo) & (k <= hi)]


def solvability_defect(op, kappa_star, f=None):
    """int_0^b f chi ds at a characteristic value (f defaults to the homogeneous term)."""
    chi, _ = transposed_null_function(op, kappa_star)
    f = op.hom_term if f is None else np.asarray(f, dtype=float)
    return float(np.dot(op.weights, f * chi))


def characteristic_lambdas(alpha, kappa, b, n, lo, hi, scan_points=60, tol=1e-8):
    """Secondary mode: lambda values where (I - kappa K(lambda)) is singular.

    lambda enters the kernel through the Bessel arguments as well, so the
    operator is rebuilt at every trial value.
    """
    from .oscillator import PotentialSpec

    def sign(lam):
        op = build_nystrom(PotentialSpec(alpha=alpha, lam=lam, kappa=kappa), b, n)
        return _det_sign(op, kappa)

    grid = np.linspace(lo, hi, scan_points)
    signs = [sign(v) for v in grid]
    roots = []
    for j in range(len(grid) - 1):
        if signs[j] * signs[j + 1] < 0:
            a, c, sa = grid[j], grid[j + 1], signs[j]
            while c - a > tol * max(1.0, abs(a)):
                mid = 0.5 * (a + c)
                if sign(mid) == sa:
                    a = mid
                else:
                    c = mid
            roots.append(0.5 * (a + c))
    return roots


def b_limit_study(spec, b_values, n_per_unit=12.8, probes=(0.5, 1.0, 2.0), gamma_coef=1.0,
                  n_max=N_RANGE[1]):
    """W at fixed probe points for increasing b, with n proportional to b.

    Returns ``(rows, increments)``: rows are ``(b, n, W(probes)...)`` and
    increments the max-abs change of the probe values between successive b.
    """
    rows = []
    prev = None
    increments = []
    for b in b_values:
        n = int(min(max(round(n_per_unit * b), N_RANGE[0]), n_max))
        op = build_nystrom(spec, b, n)
        w = solve_w(op, spec.kappa, gamma_coef)
        vals = interpolate_w(op, w, np.asarray(probes, dtype=float), spec.kappa, gamma_coef)
        rows.append((float(b), n) + tuple(float(v) for v in vals))
        if prev is not None:
            increments.append(float(np.max(np.abs(vals - prev))))
        prev = vals
    return rows, increments
