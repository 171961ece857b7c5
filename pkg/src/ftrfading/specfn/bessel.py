"""Zero-order modified Bessel function of the first kind, I0."""

from __future__ import annotations

import math

# Switch from the power series to the large-argument expansion.
_ASYMPTOTIC_FROM = 30.0
# log of the largest double; I0(x) ~ e^x / sqrt(2 pi x) passes it near x = 713.99.
_LOG_MAX = math.log(1.7976931348623157e308)


def _series(x: float) -> float:
    y = 0.25 * x * x
    total, term, k = 1.0, 1.0, 0
    while True:
        k += 1
        term *= y / (k * k)
        total += term
        if term < 1e-17 * total:
            return total


def _asymptotic_scaled(x: float) -> float:
    """sqrt(2 pi x) e^{-x} I0(x) from the Hankel expansion (terms shrink until k ~ 2x)."""
    total, term, k = 1.0, 1.0, 0
    while True:
        k += 1
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if nxt > term:
            return total
        term = nxt
        total += term
        if term < 1e-17 * total:
            return total


def bessel_i0e(x: float) -> float:
    """Exponentially scaled ``exp(-|x|) * I0(x)``; never overflows."""
    if not math.isfinite(x):
        raise ValueError("bessel_i0e requires a finite argument")
    x = abs(x)
    if x <= _ASYMPTOTIC_FROM:
        return _series(x) * math.exp(-x)
    return _asymptotic_scaled(x) / math.sqrt(2.0 * math.pi * x)


def bessel_i0(x: float) -> float:
    """I0(x) for real x. Raises OverflowError once the value exceeds double range."""
    if not math.isfinite(x):
        raise ValueError("bessel_i0 requires a finite argument")
    x = abs(x)
    if x <= _ASYMPTOTIC_FROM:
        return _series(x)
    log_val = x - 0.5 * math.log(2.0 * math.pi * x) + math.log(_asymptotic_scaled(x))
    if log_val >= _LOG_MAX:
        raise OverflowError(f"I0({x}) exceeds the double-precision range")
    return math.exp(log_val)
