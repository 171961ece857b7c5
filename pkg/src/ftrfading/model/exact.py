"""Exact SNR density and distribution by numerical Laplace inversion.

For integer ``m`` the MGF factorises over four constants ``a1..a4``; with
``w = sqrt(p+a2) sqrt(p+a3)`` the Laplace transform of the density is

    F(p) = (1+K)/gbar * (m/D)^m * ((p+a4)/w)^(m-1) * P_{m-1}((m+K)(p+a1)/(D w)) / w,

``D = sqrt((m+K)^2 - K^2 Delta^2)``. Its only singularities are the branch
points at ``-a2`` and ``-a3``, so the Bromwich contour may be pulled left of
the origin, which is what keeps the tail values accurate in relative terms.

As m grows the branch points turn into poles of order about m and the
inversion loses accuracy without its error estimate noticing. Above
``INVERSION_M_MAX`` the same quantities are computed instead as a phase
average of the closed-form shadowed-Rician laws over the specular phase
difference, which converges geometrically for any m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .. import kernels
from ..errors import NonConvergence
from ..specfn import DEFAULT_INVERSION, LaplaceInversion, bessel_i0e, inverse_laplace, legendre_poly
from .params import FtrParams

INVERSION_M_MAX = 50


@dataclass(frozen=True)
class PolyCoeffs:
    """Inverse-SNR constants of the factorised MGF (poles/zeros at s = a_i)."""

    a1: float
    a2: float
    a3: float
    a4: float


def poly_coeffs(p: FtrParams) -> PolyCoeffs:
    m = p.require_integer_m()
    K, D, g = p.K, p.Delta, p.gamma_bar
    num = m * (1 + K)
    return PolyCoeffs(
        a1=num / ((m + K) * g),
        a2=num / ((m + K * (1 + D)) * g),
        a3=num / ((m + K * (1 - D)) * g),
        a4=(1 + K) / g,
    )


def r_factorized(p: FtrParams, s):
    """``R(m, K, Delta; s)`` rebuilt from the product of its two linear factors."""
    K, D, m, g = p.K, p.Delta, p.m, p.gamma_bar
    s = np.asarray(s, dtype=float)
    return (m * (1 + K) - (m + K * (1 + D)) * g * s) * (m * (1 + K) - (m + K * (1 - D)) * g * s)


def _root_d(p: FtrParams) -> float:
    return math.sqrt((p.m + p.K) ** 2 - (p.K * p.Delta) ** 2)


def density_transform(p: FtrParams):
    """Return ``(transform, abscissa)`` for the SNR density of ``p``.

    ``transform`` maps complex Laplace variables to ``E[exp(-p gamma)]``;
    ``abscissa`` is the real part of its rightmost singularity. Integer m and
    the non-fluctuating limit ``m = inf`` are supported; for the latter the
    abscissa is a safe contour bound rather than a singularity, and the
    density routines use a phase average instead.
    """
    if not math.isfinite(p.m):
        return _twdp_transform(p)
    m = p.require_integer_m()
    c = poly_coeffs(p)
    d = _root_d(p)
    lead = (1 + p.K) / p.gamma_bar * (m / d) ** m
    ucoef = (m + p.K) / d

    def transform(s):
        return kernels.ftr_transform(s, c.a1, c.a2, c.a3, c.a4, m, lead, ucoef)

    return transform, -c.a2


def _twdp_transform(p: FtrParams):
    a4 = (1 + p.K) / p.gamma_bar
    K, D = p.K, p.Delta

    def transform(s):
        s = np.asarray(s, dtype=complex)
        a = -K * s / (s + a4)
        # exp(a) I0(D a) = exp(a + |Re(D a)|) * ive(0, D a)
        return a4 / (s + a4) * np.exp(a + np.abs((D * a).real)) * special.ive(0, D * a)

    # Essential singularity at -a4; staying a quarter of the way out keeps
    # exp(-K s/(s+a4)) bounded on the shifted contour.
    return transform, -0.25 * a4


def pdf_at_zero(p: FtrParams) -> float:
    """Density at the origin, ``lim_{p->inf} p F(p)``."""
    if not math.isfinite(p.m):
        a4 = (1 + p.K) / p.gamma_bar
        return a4 * math.exp(-p.K + p.K * p.Delta) * bessel_i0e(p.K * p.Delta)
    m = p.require_integer_m()
    d = _root_d(p)
    return (1 + p.K) / p.gamma_bar * (m / d) ** m * legendre_poly(m - 1, (m + p.K) / d)


def _phase_average(func, p: FtrParams, x, tol=1e-14, atol=1e-300, max_nodes=1 << 14):
    """Average over kappa = K(1 + Delta cos t), t uniform on [0, 2 pi).

    ``func(x, kappa)`` returns the mean of the kernel over the given kappa
    nodes. The integrand is smooth and periodic, so the trapezoid rule
    converges geometrically; nodes are doubled until two passes agree.
    """
    n = 32
    prev = None
    while True:
        t = (np.arange(n) + 0.5) * (np.pi / n)  # symmetric in t, so [0, pi] suffices
        kappa = p.K * (1.0 + p.Delta * np.cos(t))
        cur = func(x, kappa)
        if prev is not None and np.all(np.abs(cur - prev) <= tol * np.abs(cur) + atol):
            return cur
        if n >= max_nodes:
            raise NonConvergence("phase average did not settle", estimate=float(np.max(np.abs(cur - prev))))
        prev, n = cur, 2 * n


def _rician_pdf_k(p: FtrParams, x, kappa):
    beta = (1 + p.K) / p.gamma_bar
    x, kappa = np.asarray(x)[:, None], np.atleast_1d(kappa)[None, :]
    arg = 2.0 * np.sqrt(kappa * beta * x)
    return np.mean(beta * np.exp(-kappa - beta * x + arg) * special.i0e(arg), axis=1)


def _rician_cdf_k(p: FtrParams, x, kappa):
    beta = (1 + p.K) / p.gamma_bar
    x, kappa = np.asarray(x)[:, None], np.atleast_1d(kappa)[None, :]
    return np.mean(special.chndtr(2.0 * beta * x, 2.0, 2.0 * kappa), axis=1)


def _shadowed_pdf_k(p: FtrParams, x, kappa):
    kappa = np.atleast_1d(kappa)
    weights = np.full(kappa.shape, 1.0 / kappa.size)
    return kernels.mixture_pdf(x, (1 + p.K) / p.gamma_bar, int(p.m), kappa, weights)


def _shadowed_cdf_k(p: FtrParams, x, kappa):
    kappa = np.atleast_1d(kappa)
    weights = np.full(kappa.shape, 1.0 / kappa.size)
    return 1.0 - kernels.mixture_sf(x, (1 + p.K) / p.gamma_bar, int(p.m), kappa, weights)


def _phase_route(p: FtrParams, xs, kernel, atol=1e-300):
    """Phase average of ``kernel``; a single evaluation when Delta = 0."""
    if p.Delta == 0:
        return kernel(p, xs, p.K)
    return _phase_average(lambda x, k: kernel(p, x, k), p, xs, atol=atol)


def _as_output(values, x):
    return float(values) if np.ndim(x) == 0 else values


def pdf_exact(p: FtrParams, x, cfg: LaplaceInversion = DEFAULT_INVERSION, *, check: bool = True):
    """Exact SNR density ``f_gamma(x)`` for integer m (or ``m = inf``).

    Raises :class:`~ftrfading.errors.NonConvergence` when the inversion
    misses ``cfg.target_rel_error`` (unless ``check=False``).
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise ValueError("pdf_exact needs finite x >= 0")
    if not math.isfinite(p.m):
        return _as_output(_phase_route(p, xs, _rician_pdf_k).reshape(np.shape(x)), x)
    if p.require_integer_m() > INVERSION_M_MAX:
        return _as_output(_phase_route(p, xs, _shadowed_pdf_k).reshape(np.shape(x)), x)
    out = np.empty_like(xs)
    zero = xs == 0
    out[zero] = pdf_at_zero(p)
    if np.any(~zero):
        transform, abscissa = density_transform(p)
        res = inverse_laplace(transform, xs[~zero], cfg, abscissa=abscissa, check=check)
        out[~zero] = np.maximum(res.value, 0.0)
    return _as_output(out.reshape(np.shape(x)), x)


def cdf_exact(p: FtrParams, x, cfg: LaplaceInversion = DEFAULT_INVERSION, *, check: bool = True):
    """Exact SNR distribution ``F_gamma(x)`` for integer m (or ``m = inf``).

    Below ``gamma_bar`` the transform divided by p is inverted, above it the
    survival function, so both tails keep their relative accuracy.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise ValueError("cdf_exact needs finite x >= 0")
    if not math.isfinite(p.m):
        return _as_output(_phase_route(p, xs, _rician_cdf_k).reshape(np.shape(x)), x)
    if p.require_integer_m() > INVERSION_M_MAX:
        return _as_output(np.clip(_phase_route(p, xs, _shadowed_cdf_k, atol=1e-14), 0.0, 1.0).reshape(np.shape(x)), x)
    out = np.zeros_like(xs)
    transform, abscissa = density_transform(p)
    # Lower part from F(p)/p, upper part from the survival transform
    # (1 - F(p))/p, which is analytic at 0 so its contour can move left.
    low = (xs > 0) & (xs <= p.gamma_bar)
    high = xs > p.gamma_bar
    if np.any(low):
        res = inverse_laplace(lambda s: transform(s) / s, xs[low], cfg, abscissa=0.0, check=check)
        out[low] = res.value
    if np.any(high):
        res = inverse_laplace(lambda s: (1.0 - transform(s)) / s, xs[high], cfg, abscissa=abscissa, check=check)
        out[high] = 1.0 - res.value
    out = np.clip(out, 0.0, 1.0)
    return _as_output(out.reshape(np.shape(x)), x)
