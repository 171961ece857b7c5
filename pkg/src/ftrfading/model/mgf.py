"""Moment generating functions of the received SNR."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..specfn import bessel_i0e, gauss_2f1, legendre_fn, legendre_fn_large, legendre_poly, log_legendre_poly
from .params import FtrParams

# Above this degree the Legendre polynomial is evaluated in log scale.
_DIRECT_DEGREE_MAX = 64


def r_poly(p: FtrParams, s):
    """The quadratic ``R(m, K, Delta; s)`` under the square root of the MGF."""
    K, D, m, g = p.K, p.Delta, p.m, p.gamma_bar
    s = np.asarray(s, dtype=float)
    return ((m + K) ** 2 - D * D * K * K) * g * g * s * s - 2.0 * m * (1 + K) * (m + K) * g * s + (
        m * m * (1 + K) ** 2
    )


def _log_legendre(mu: float, z: float, integer: bool) -> float:
    z = max(z, 1.0)  # z >= 1 on s <= 0; clamp rounding
    if integer:
        n = int(mu)
        if n <= _DIRECT_DEGREE_MAX:
            return math.log(legendre_poly(n, z))
        return log_legendre_poly(n, z)
    if abs(1.0 - z) < 2.0:
        return math.log(legendre_fn(mu, z))
    return math.log(legendre_fn_large(mu, z))


def _ftr_mgf_scalar(p: FtrParams, s: float) -> float:
    """Closed-form MGF at a real point left of the first singularity."""
    if s == 0.0:
        return 1.0
    if not math.isfinite(p.m):
        return twdp_mgf(p.K, p.Delta, p.gamma_bar, s)
    K, m, g = p.K, p.m, p.gamma_bar
    R = float(r_poly(p, s))
    root = math.sqrt(R)
    z = (m * (1 + K) - (m + K) * g * s) / root
    log_val = (
        math.log1p(K)
        + (m - 1.0) * math.log(1 + K - g * s)
        + m * math.log(m)
        - m * math.log(root)
        + _log_legendre(m - 1.0, z, p.integer_m)
    )
    return math.exp(log_val)


def mgf(p: FtrParams, s):
    """MGF ``E[exp(s * gamma)]`` of the FTR SNR for real ``s <= 0``.

    Any positive ``m`` is accepted; integer ``m`` uses a Legendre polynomial,
    other values the Legendre function, and ``m = inf`` the two-wave limit.
    """
    arr = np.asarray(s, dtype=float)
    if np.any(arr > 0) or not np.all(np.isfinite(arr)):
        raise DomainError("mgf is evaluated on the real axis s <= 0 only")
    if arr.ndim == 0:
        return _ftr_mgf_scalar(p, float(arr))
    return np.array([_ftr_mgf_scalar(p, float(v)) for v in arr.ravel()]).reshape(arr.shape)


def mgf_derivative_mean(p: FtrParams) -> float:
    """Mean SNR recovered by differentiating the MGF at the origin.

    Richardson-extrapolated central differences; should reproduce ``gamma_bar``.
    """
    h = 1e-3 / p.gamma_bar

    def diff(step):
        return (_ftr_mgf_scalar(p, step) - _ftr_mgf_scalar(p, -step)) / (2.0 * step)

    return (4.0 * diff(h / 2.0) - diff(h)) / 3.0


def twdp_mgf(K: float, Delta: float, gamma_bar: float, s: float) -> float:
    """MGF of the two-wave-with-diffuse-power model (constant specular amplitudes)."""
    denom = 1 + K - gamma_bar * s
    a = K * gamma_bar * s / denom
    # exp(a) * I0(Delta*a) with a <= 0, scaled to stay in range.
    return (1 + K) / denom * math.exp(a + abs(Delta * a)) * bessel_i0e(Delta * a)


def rician_mgf(K: float, gamma_bar: float, s: float) -> float:
    denom = 1 + K - gamma_bar * s
    return (1 + K) / denom * math.exp(K * gamma_bar * s / denom)


def rician_shadowed_mgf(K: float, m: float, gamma_bar: float, s: float) -> float:
    """Rician MGF averaged over a unit-mean Gamma(m) specular power.

    ``B(s) * (1 - A(s)/m)^(-m)`` with ``A = K gbar s / (1+K-gbar s)``, ``B = (1+K)/(1+K-gbar s)``.
    """
    denom = 1 + K - gamma_bar * s
    a = K * gamma_bar * s / denom
    return (1 + K) / denom * (1.0 - a / m) ** (-m)


def hoyt_q(p: FtrParams) -> float:
    """Nakagami-q parameter of the FTR model with m = 1."""
    if p.m != 1:
        raise DomainError(f"the Hoyt correspondence needs m = 1, got m = {p.m}")
    return math.sqrt((1 + p.K * (1 - p.Delta)) / (1 + p.K * (1 + p.Delta)))


def hoyt_mgf(q: float, gamma_bar: float, s: float) -> float:
    """MGF of the Nakagami-q (Hoyt) SNR."""
    c = 4.0 * q * q / (1.0 + q * q) ** 2
    return 1.0 / math.sqrt(c * gamma_bar * gamma_bar * s * s - 2.0 * gamma_bar * s + 1.0)


def nakagami_mgf(m: float, gamma_bar: float, s: float) -> float:
    return (1.0 - gamma_bar * s / m) ** (-m)


def rayleigh_mgf(gamma_bar: float, s: float) -> float:
    return 1.0 / (1.0 - gamma_bar * s)


def one_sided_gaussian_mgf(gamma_bar: float, s: float) -> float:
    return (1.0 - 2.0 * gamma_bar * s) ** -0.5


def _independent_scalar(p: FtrParams, s: float) -> float:
    if s == 0.0:
        return 1.0
    K, D, m, gb = p.K, p.Delta, p.m, p.gamma_bar
    if not math.isfinite(m):
        return twdp_mgf(K, D, gb, s)
    denom = 1 + K - gb * s
    g = gb * s / denom
    base = 1.0 - K * g / m + (K * D * g) ** 2 / (4.0 * m * m)
    arg = (K * D * g) ** 2 / (4.0 * m * m - 4.0 * m * K * g + (K * D * g) ** 2)
    if not 0.0 <= arg < 1.0:
        raise DomainError(f"2F1 argument {arg} left [0, 1)")
    return (1 + K) / denom * base ** (-m) * gauss_2f1(m, m, 1.0, arg)


def mgf_independent(p: FtrParams, s):
    """MGF when the two specular components fluctuate independently.

    Each specular amplitude gets its own unit-mean Gamma(m) power scaling.
    """
    arr = np.asarray(s, dtype=float)
    if np.any(arr > 0) or not np.all(np.isfinite(arr)):
        raise DomainError("mgf_independent is evaluated on the real axis s <= 0 only")
    if arr.ndim == 0:
        return _independent_scalar(p, float(arr))
    return np.array([_independent_scalar(p, float(v)) for v in arr.ravel()]).reshape(arr.shape)


__all__ = [
    "hoyt_mgf",
    "hoyt_q",
    "mgf",
    "mgf_derivative_mean",
    "mgf_independent",
    "nakagami_mgf",
    "one_sided_gaussian_mgf",
    "r_poly",
    "rayleigh_mgf",
    "rician_mgf",
    "rician_shadowed_mgf",
    "twdp_mgf",
]
