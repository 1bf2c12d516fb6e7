"""Scalar kernels for exponentially scaled modified Bessel functions of real order.

Method: the ratio I_{nu+1}/I_nu from its continued fraction, downward recurrence
to the reduced order mu in [-1/2, 1/2), Temme's series (x <= 2) or Steed's
continued fraction (x > 2) for K_mu and K_{mu+1}, the Wronskian
I_mu K_{mu+1} + I_{mu+1} K_mu = 1/x to normalize I, and forward recurrence for K.
Above ``ASYMPTOTIC_X`` the Hankel large-argument series is used for both kinds.
All outputs carry the scaling I*exp(-x), K*exp(x).
"""
import math

from .._accel import jit
from .gamma import temme_gammas

EPS = 1e-16
MAXIT = 100000
TEMME_X = 2.0
ASYMPTOTIC_X = 40.0


@jit
def _ratio_cf1(nu, x):
    """I_{nu+1}(x) / I_nu(x) by modified Lentz."""
    tiny = 1e-300
    xi2 = 2.0 / x
    f = tiny
    c = f
    d = 0.0
    for k in range(1, MAXIT):
        b = (nu + k) * xi2
        d = b + d
        if d == 0.0:
            d = tiny
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < EPS:
            break
    return f


@jit
def _k_reduced(mu, x):
    """Unscaled-argument pair (K_mu e^x, K_{mu+1} e^x) for |mu| <= 1/2."""
    xi = 1.0 / x
    mu2 = mu * mu
    if x <= TEMME_X:
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = temme_gammas(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, MAXIT):
            ff = (i * ff + p + q) / (i * i - mu2)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delta = c * ff
            total += delta
            total1 += c * p - i * delta
            if abs(delta) < abs(total) * EPS:
                break
        scale = math.exp(x)
        return total * scale, total1 * 2.0 * xi * scale
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu2
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, MAXIT):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < EPS:
            break
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = kmu * (mu + x + 0.5 - h) * xi
    return kmu, k1


@jit
def _hankel(nu, x, sign):
    """Hankel series sum_k sign^k a_k(nu) / x^k, truncated at its smallest term."""
    m4 = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    prev = 1e300
    for k in range(1, 200):
        odd = 2.0 * k - 1.0
        term *= sign * (m4 - odd * odd) / (8.0 * k * x)
        mag = abs(term)
        if mag > prev:
            break
        total += term
        if mag < EPS * abs(total):
            break
        prev = mag
    return total


@jit
def ik_scaled(nu, x):
    """Return ``(I_nu e^-x, K_nu e^x, I_{nu+1} e^-x, K_{nu+1} e^x)`` for nu >= 0, x > 0."""
    if x >= ASYMPTOTIC_X:
        ri = 1.0 / math.sqrt(2.0 * math.pi * x)
        rk = math.sqrt(math.pi / (2.0 * x))
        return (ri * _hankel(nu, x, -1.0), rk * _hankel(nu, x, 1.0),
                ri * _hankel(nu + 1.0, x, -1.0), rk * _hankel(nu + 1.0, x, 1.0))
    nl = int(nu + 0.5)
    mu = nu - nl
    xi = 1.0 / x
    r = _ratio_cf1(nu, x)
    # downward recurrence on an unnormalized pair, orders nu+1, nu -> mu+1, mu
    i_hi = r
    i_lo = 1.0
    for l in range(nl, 0, -1):
        m = mu + l
        i_new = 2.0 * m * xi * i_lo + i_hi
        i_hi = i_lo
        i_lo = i_new
    # i_lo ~ I_mu, i_hi ~ I_{mu+1}; same normalization as I_nu = 1
    kmu, k1 = _k_reduced(mu, x)
    imu = xi / (k1 + (i_hi / i_lo) * kmu)
    inu = imu / i_lo
    for l in range(1, nl + 1):
        k_new = 2.0 * (mu + l) * xi * k1 + kmu
        kmu = k1
        k1 = k_new
    return inu, kmu, inu * r, k1
