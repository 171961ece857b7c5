"""Finite mixture approximation of the FTR SNR distribution.

The non-fluctuating two-wave density is an average over a phase angle of
Rician densities; sampling that angle at 2M equispaced nodes on [0, pi]
with Newton-Cotes weights and folding the symmetric nodes gives a mixture
of 2M Rician laws. Averaging each over the Gamma fluctuation turns the
Rician kernels into Rician-shadowed ones, which for integer m are finite
sums of exponentials and powers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import kernels
from ..errors import DomainError, PrecisionWarning
from .params import FtrParams

# Beyond this order the weights alternate in sign with factorial growth and
# the mixture sum cancels badly in floating point.
PRECISE_ORDER_MAX = 25


@dataclass(frozen=True)
class MixtureCoeffs:
    """Mixture order ``M``, weights ``alpha`` (sum to one) and offsets ``delta``."""

    M: int
    alpha: tuple
    delta: tuple

    def __post_init__(self):
        if len(self.alpha) != self.M or len(self.delta) != self.M:
            raise DomainError("alpha and delta must both have length M")
        # Large orders carry huge alternating weights whose float sum is inexact.
        if self.M <= PRECISE_ORDER_MAX and abs(math.fsum(self.alpha) - 1.0) > 1e-10:
            raise DomainError("mixture weights must sum to one")


def default_order(p: FtrParams) -> int:
    """``ceil(K * Delta) + 1``, the smallest admissible order."""
    return math.ceil(p.K * p.Delta) + 1


def _poly_mul_linear(poly, root):
    """Multiply integer polynomial (ascending coefficients) by (u - root)."""
    out = [0] * (len(poly) + 1)
    for j, c in enumerate(poly):
        out[j + 1] += c
        out[j] -= root * c
    return out


@lru_cache(maxsize=64)
def exact_weights(M: int) -> tuple:
    """Mixture weights as exact fractions.

    ``alpha_i = 2 (-1)^i / ((2M-1) (2M-i)! (i-1)!) * int_0^{2M-1} prod_{k != i} (u - k + 1) du``
    for i = 1..M: twice the closed Newton-Cotes weight of node i-1 on the
    2M-point grid {0, ..., 2M-1}, normalised by the interval length.
    """
    if M < 1:
        raise DomainError("mixture order must be >= 1")
    upper = 2 * M - 1
    weights = []
    for i in range(1, M + 1):
        poly = [1]
        for k in range(1, 2 * M + 1):
            if k != i:
                poly = _poly_mul_linear(poly, k - 1)
        integral = sum(Fraction(c * upper ** (j + 1), j + 1) for j, c in enumerate(poly))
        scale = Fraction(2 * (-1) ** i, upper * math.factorial(2 * M - i) * math.factorial(i - 1))
        weights.append(scale * integral)
    return tuple(weights)


def mixture_coeffs(p: FtrParams, M: int | None = None) -> MixtureCoeffs:
    """Weights and offsets of the order-``M`` mixture (default ``ceil(K Delta) + 1``)."""
    if M is None:
        M = default_order(p)
    if int(M) != M or M < 1:
        raise DomainError(f"mixture order must be a positive integer, got {M!r}")
    M = int(M)
    if M <= math.ceil(p.K * p.Delta):
        raise DomainError(f"mixture order M={M} must exceed ceil(K*Delta)={math.ceil(p.K * p.Delta)}")
    if M > PRECISE_ORDER_MAX:
        warnings.warn(
            f"mixture order {M} > {PRECISE_ORDER_MAX}: weights alternate with factorial "
            "growth and the mixture sum loses precision",
            PrecisionWarning,
            stacklevel=2,
        )
    alpha = tuple(float(a) for a in exact_weights(M))
    delta = tuple(p.Delta * math.cos((i - 1) * math.pi / (2 * M - 1)) for i in range(1, M + 1))
    return MixtureCoeffs(M, alpha, delta)


def _kernel_args(p: FtrParams, c: MixtureCoeffs | None):
    m = p.require_integer_m()
    if c is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PrecisionWarning)
            c = mixture_coeffs(p)
    if abs(c.delta[0] - p.Delta) > 1e-12:
        raise DomainError("mixture coefficients were built for a different Delta")
    d = np.asarray(c.delta)
    a = np.asarray(c.alpha)
    kappas = np.concatenate([p.K * (1.0 - d), p.K * (1.0 + d)])
    weights = np.concatenate([a / 2.0, a / 2.0])
    return m, (1 + p.K) / p.gamma_bar, kappas, weights


def rician_shadowed_pdf(x, beta: float, kappa: float, m: int):
    """Single kernel ``G_m(x; beta, kappa)``: Rician density averaged over Gamma(m)."""
    return kernels.mixture_pdf(np.asarray(x, float), beta, m, [kappa], [1.0])


def rician_shadowed_sf(x, beta: float, kappa: float, m: int):
    """Survival function ``H_m(x; beta, kappa)`` matching :func:`rician_shadowed_pdf`."""
    return kernels.mixture_sf(np.asarray(x, float), beta, m, [kappa], [1.0])


def pdf_approx(p: FtrParams, x, c: MixtureCoeffs | None = None):
    """Mixture approximation of the SNR density (integer m)."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("pdf_approx needs x >= 0")
    m, beta, kappas, weights = _kernel_args(p, c)
    out = kernels.mixture_pdf(xs, beta, m, kappas, weights)
    return float(out) if out.ndim == 0 else out


def cdf_approx(p: FtrParams, x, c: MixtureCoeffs | None = None):
    """Mixture approximation of the SNR distribution (integer m)."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0):
        raise ValueError("cdf_approx needs x >= 0")
    m, beta, kappas, weights = _kernel_args(p, c)
    out = 1.0 - kernels.mixture_sf(xs, beta, m, kappas, weights)
    return float(out) if out.ndim == 0 else out
