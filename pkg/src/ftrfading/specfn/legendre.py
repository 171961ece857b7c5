"""Legendre polynomials and Legendre functions of the first kind."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from .hypergeometric import gauss_2f1

# Degrees up to this value use the explicit finite sum; above it the
# three-term recurrence (the alternating sum loses digits for large n).
SUM_MAX_DEGREE = 10


def legendre_coefficient(n: int, q: int) -> int:
    """Integer coefficient ``C(n, q) * C(2n - 2q, n)`` of the explicit sum."""
    return math.comb(n, q) * math.comb(2 * n - 2 * q, n)


def legendre_sum(n: int, z):
    """P_n(z) from the explicit alternating sum ``2^-n sum (-1)^q C_q^n z^(n-2q)``."""
    z = np.asarray(z, dtype=float)
    total = np.zeros_like(z)
    for q in range(n // 2 + 1):
        total = total + (-1) ** q * legendre_coefficient(n, q) * z ** (n - 2 * q)
    return total / 2.0**n


def legendre_recurrence(n: int, z):
    """P_n(z) by Bonnet's upward recurrence."""
    z = np.asarray(z, dtype=float)
    p_prev = np.ones_like(z)
    if n == 0:
        return p_prev
    p = z.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * z * p - k * p_prev) / (k + 1)
    return p


def legendre_poly(n: int, z):
    """Legendre polynomial of degree ``n`` evaluated at real ``z``.

    Scalars in, scalars out; arrays are evaluated elementwise.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    n = int(n)
    zz = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(zz)):
        raise DomainError("legendre_poly requires finite z")
    out = legendre_sum(n, zz) if n <= SUM_MAX_DEGREE else legendre_recurrence(n, zz)
    return float(out) if out.ndim == 0 else out


def log_legendre_poly(n: int, z: float) -> float:
    """log P_n(z) for z >= 1, rescaling during the recurrence so large n
    cannot overflow."""
    if z < 1.0:
        raise DomainError("log_legendre_poly is only defined here for z >= 1")
    if n == 0:
        return 0.0
    p_prev, p, log_scale = 1.0, float(z), 0.0
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * z * p - k * p_prev) / (k + 1)
        if p > 1e100:
            p_prev /= p
            log_scale += math.log(p)
            p = 1.0
    return log_scale + math.log(p)


def legendre_fn(mu: float, z: float) -> float:
    """Legendre function of the first kind ``P_mu(z) = 2F1(-mu, mu+1; 1; (1-z)/2)``.

    Only the hypergeometric representation is used, so ``|1 - z| < 2`` is
    required; outside that disk a :class:`DomainError` is raised rather than
    continuing analytically.
    """
    if not (math.isfinite(mu) and math.isfinite(z)):
        raise DomainError("legendre_fn requires finite arguments")
    if abs(1.0 - z) >= 2.0:
        raise DomainError(f"legendre_fn needs |1 - z| < 2, got z = {z!r}")
    return gauss_2f1(-mu, mu + 1.0, 1.0, (1.0 - z) / 2.0)


def legendre_fn_large(mu: float, z: float) -> float:
    """P_mu(z) for z >= 1 through ``((z+1)/2)^mu 2F1(-mu, -mu; 1; (z-1)/(z+1))``.

    The argument stays in [0, 1) for every z >= 1, which covers the part of
    the real axis that :func:`legendre_fn` rejects.
    """
    if z < 1.0:
        raise DomainError("legendre_fn_large expects z >= 1")
    return ((z + 1.0) / 2.0) ** mu * gauss_2f1(-mu, -mu, 1.0, (z - 1.0) / (z + 1.0))
