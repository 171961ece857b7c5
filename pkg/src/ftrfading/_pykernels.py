"""Pure-numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable, or when
``FTR_PURE_PYTHON=1`` is set. Signatures and results match the compiled
versions; arguments arrive as 1-D contiguous arrays.
"""

import math

import numpy as np
from scipy import special


def ftr_transform(p, a1, a2, a3, a4, m, lead, ucoef):
    """Laplace transform of the FTR SNR density at complex points ``p``.

    Written as ``lead * ((p+a4)/w)^(m-1) * P_{m-1}(ucoef*(p+a1)/w) / w`` with
    ``w = sqrt(p+a2) * sqrt(p+a3)`` (principal roots taken separately, which
    keeps the function analytic off the cut (-inf, -a2]).
    """
    p = np.asarray(p, dtype=complex)
    w = np.sqrt(p + a2) * np.sqrt(p + a3)
    z = ucoef * (p + a1) / w
    prev = np.ones_like(p)
    cur = z
    if m == 1:
        leg = prev
    else:
        for k in range(1, m - 1):
            prev, cur = cur, ((2 * k + 1) * z * cur - k * prev) / (k + 1)
        leg = cur
    ratio = (p + a4) / w
    return lead * ratio ** (m - 1) * leg / w


def mixture_pdf(x, beta, m, kappas, weights):
    """``sum_j weights[j] * G_m(x; beta, kappas[j])`` (Gamma-averaged Rician kernels)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for kappa, wgt in zip(kappas, weights):
        tau = m / (kappa + m)
        y = (kappa / (kappa + m)) * beta * x
        term = np.ones_like(x)
        total = np.ones_like(x)
        for n in range(m - 1):
            term = term * ((m - 1 - n) / (n + 1)) * y / (n + 1)
            total = total + term
        out = out + wgt * (tau**m) * beta * np.exp(-beta * tau * x) * total
    return out


def _binomial_tail(m, rho):
    """T[j] = P(Binomial(m-1, rho) >= j) for j = 0..m-1."""
    n = m - 1
    if rho == 0:
        return np.where(np.arange(m) == 0, 1.0, 0.0)
    k = np.arange(n + 1)
    # log space: the pmf's first entry (1 - rho)^n underflows for large m rho
    log_pmf = special.gammaln(m) - special.gammaln(k + 1) - special.gammaln(m - k)
    log_pmf += k * math.log(rho) + (n - k) * math.log1p(-rho)
    return np.cumsum(np.exp(log_pmf)[::-1])[::-1]


def mixture_sf(x, beta, m, kappas, weights):
    """``sum_j weights[j] * H_m(x; beta, kappas[j])`` -- the matching survival sum.

    ``H_m`` is evaluated as ``sum_j Poisson(j; beta*tau*x) * P(Bin(m-1, rho) >= j)``
    with ``tau = m/(kappa+m)``, ``rho = kappa/(kappa+m)``: a regrouping of the
    double sum with only non-negative terms.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for kappa, wgt in zip(kappas, weights):
        tau = m / (kappa + m)
        tail = _binomial_tail(m, kappa / (kappa + m))
        lam = beta * tau * x
        pois = np.exp(-lam)
        total = pois * tail[0]
        for j in range(1, m):
            pois = pois * lam / j
            total = total + pois * tail[j]
        out = out + wgt * total
    return out
