"""Method dispatch for the SNR and envelope distribution functions."""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import DomainError, PrecisionWarning
from ..specfn import DEFAULT_INVERSION, LaplaceInversion
from .exact import cdf_exact, pdf_exact
from .mixture import cdf_approx, mixture_coeffs, pdf_approx
from .params import FtrParams

METHODS = ("exact", "approx", "auto")
AUTO_TOLERANCE = 1e-3
_PROBE = np.linspace(0.05, 5.0, 12)


def _check_method(method):
    if method not in METHODS:
        raise DomainError(f"method must be one of {METHODS}, got {method!r}")


def resolve_method(p: FtrParams, method: str = "auto", cfg: LaplaceInversion = DEFAULT_INVERSION) -> str:
    """Turn ``auto`` into a concrete method for ``p``.

    The mixture is used unless it departs from the exact density by more
    than ``AUTO_TOLERANCE`` (relative to the peak) on a coarse probe grid.
    """
    _check_method(method)
    if method != "auto":
        return method
    if not math.isfinite(p.m):
        return "exact"
    p.require_integer_m()
    x = _PROBE * p.gamma_bar
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrecisionWarning)
        approx = pdf_approx(p, x)
    exact = pdf_exact(p, x, cfg)
    scale = max(float(np.max(exact)), 1e-300)
    return "approx" if np.max(np.abs(approx - exact)) <= AUTO_TOLERANCE * scale else "exact"


def _approx_coeffs(p, M):
    return None if M is None else mixture_coeffs(p, M)


def pdf(p: FtrParams, x, method: str = "auto", cfg: LaplaceInversion = DEFAULT_INVERSION, M: int | None = None):
    """SNR density by the exact inversion or the mixture approximation."""
    method = resolve_method(p, method, cfg)
    if method == "exact":
        return pdf_exact(p, x, cfg)
    return pdf_approx(p, x, _approx_coeffs(p, M))


def cdf(p: FtrParams, x, method: str = "auto", cfg: LaplaceInversion = DEFAULT_INVERSION, M: int | None = None):
    """SNR distribution function, dispatched like :func:`pdf`."""
    method = resolve_method(p, method, cfg)
    if method == "exact":
        return cdf_exact(p, x, cfg)
    return cdf_approx(p, x, _approx_coeffs(p, M))


def _envelope_params(p: FtrParams, omega):
    if omega is None:
        return p
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive and finite, got {omega}")
    return p.with_gamma_bar(float(omega))


def envelope_pdf(p: FtrParams, r, omega: float | None = None, method: str = "auto", cfg=DEFAULT_INVERSION):
    """Density of the amplitude ``r``, ``2 r f_gamma(r^2)`` with ``gamma_bar = omega``."""
    q = _envelope_params(p, omega)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("envelope_pdf needs r >= 0")
    out = 2.0 * r * pdf(q, r * r, method, cfg)
    return float(out) if np.ndim(out) == 0 else out


def envelope_cdf(p: FtrParams, r, omega: float | None = None, method: str = "auto", cfg=DEFAULT_INVERSION):
    """Distribution of the amplitude, ``F_gamma(r^2)`` with ``gamma_bar = omega``."""
    q = _envelope_params(p, omega)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("envelope_cdf needs r >= 0")
    out = cdf(q, r * r, method, cfg)
    return float(out) if np.ndim(out) == 0 else out
