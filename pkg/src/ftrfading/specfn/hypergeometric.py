"""Gauss, Kummer and Lauricella hypergeometric functions (real arguments)."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, NonConvergence
from .quadrature import DEFAULT_QUADRATURE, Quadrature, integrate_adaptive

SERIES_TOL = 1e-15
MAX_SERIES_TERMS = 500_000


def _nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _terminating_2f1(a, b, c, x):
    """Finite sum when a is a non-positive integer."""
    total, term = 1.0, 1.0
    for n in range(int(-a)):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
    return total


def gauss_2f1(a: float, b: float, c: float, x: float, tol: float = SERIES_TOL) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; x) for real |x| < 1.

    Terminating cases (``a`` or ``b`` a non-positive integer, or the same for
    ``c - a`` / ``c - b`` after Euler's transformation) are summed exactly.
    Otherwise the power series is summed until a geometric bound on the
    remaining tail falls below ``tol`` relative to max(1, |sum|).
    """
    if _nonpositive_integer(c):
        raise DomainError(f"c must not be a non-positive integer, got {c!r}")
    if not all(math.isfinite(v) for v in (a, b, c, x)):
        raise DomainError("gauss_2f1 requires finite arguments")
    if abs(x) >= 1.0:
        raise DomainError(f"gauss_2f1 requires |x| < 1, got x = {x!r}")
    if x == 0.0:
        return 1.0
    if _nonpositive_integer(a):
        return _terminating_2f1(a, b, c, x)
    if _nonpositive_integer(b):
        return _terminating_2f1(b, a, c, x)
    if _nonpositive_integer(c - a) or _nonpositive_integer(c - b):
        ca, cb = c - a, c - b
        if not _nonpositive_integer(ca):
            ca, cb = cb, ca
        return (1.0 - x) ** (c - a - b) * _terminating_2f1(ca, cb, c, x)

    # Past this index the term ratio approaches x monotonically.
    settle = 2.0 * (abs(a) + abs(b) + abs(c)) + 10.0
    total, term = 1.0, 1.0
    for n in range(MAX_SERIES_TERMS):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        term *= ratio
        total += term
        if n >= settle:
            nxt = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * x)
            rho = max(nxt, abs(x))
            if rho < 1.0 and abs(term) * rho / (1.0 - rho) <= tol * max(1.0, abs(total)):
                return total
    raise NonConvergence(
        f"2F1({a}, {b}; {c}; {x}) series did not converge in {MAX_SERIES_TERMS} terms",
        estimate=abs(term),
    )


def kummer_1f1_integer(m: int, z):
    """1F1(m; 1; z) for positive integer m via the finite Laguerre form.

    ``1F1(m; 1; z) = exp(z) * sum_{n<m} C(m-1, n) z^n / n!``
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise DomainError("kummer_1f1_integer requires finite z")
    total = np.ones_like(z)
    term = np.ones_like(z)
    for n in range(m - 1):
        term = term * (m - 1 - n) / (n + 1) * z / (n + 1)
        total = total + term
    out = np.exp(z) * total
    return float(out) if out.ndim == 0 else out


def lauricella_fd4(a: float, b, c: float, x, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """Lauricella F_D in four variables by its one-dimensional Euler integral.

    ``Gamma(c) / (Gamma(a) Gamma(c-a)) * int_0^1 t^(a-1) (1-t)^(c-a-1)
    prod_i (1 - x_i t)^(-b_i) dt``, valid for ``c > a > 0`` and all x_i < 1.
    The algebraic end-point factors are handled by QUADPACK's weighted rule.
    """
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    if b.shape != (4,) or x.shape != (4,):
        raise DomainError("lauricella_fd4 takes exactly four b and four x values")
    if not (c > a > 0):
        raise DomainError(f"need c > a > 0, got a={a!r}, c={c!r}")
    if np.any(x >= 1.0):
        raise DomainError("every x_i must be < 1")
    if np.all(b == 0.0) or np.all(x == 0.0):
        return 1.0
    log_norm = math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)
    active = (b != 0.0) & (x != 0.0)
    bb, xx = b[active], x[active]

    def integrand(t):
        return math.exp(float(np.sum(-bb * np.log1p(-xx * t))))

    value, _ = integrate_adaptive(
        integrand, 0.0, 1.0, quad, weight="alg", wvar=(a - 1.0, c - a - 1.0)
    )
    return math.exp(log_norm) * value
