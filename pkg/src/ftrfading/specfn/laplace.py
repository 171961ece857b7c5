"""Numerical inversion of Laplace transforms on the Bromwich contour.

Two independent algorithms are provided so each can check the other:

* ``euler-summation`` -- trapezoidal discretisation of the Bromwich integral
  at abscissa ``A / (2x)`` with Euler (binomial) averaging of the partial
  sums of the resulting alternating series.
* ``fixed-talbot`` -- the fixed Talbot contour of Abate and Valko, which
  deforms the Bromwich line into a parabola-like curve around the negative
  real axis.

Both take a ``transform`` that maps a complex ndarray of Laplace variables
to an ndarray of transform values. When the rightmost singularity of the
transform is known to lie at ``abscissa < 0``, the transform is evaluated
on a shifted contour and the exponential factor is restored afterwards;
this keeps the relative accuracy of exponentially decaying originals. The
shift for each ``x`` sits at the minimum of ``sigma * x + log F(sigma)`` on
the real axis, where the integrand is no larger than the original itself,
so strong singularities do not cause cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ..errors import DomainError, NonConvergence

METHODS = ("euler-summation", "fixed-talbot")

# Fraction of the distance to a negative rightmost singularity by which the
# contour is moved left when no saddle search is possible.
SHIFT_FRACTION = 0.8
# Real-axis candidates for the saddle search: log-spaced gaps to the
# singularity plus a stretch of the right half-line.
_SADDLE_GAPS = np.geomspace(1e-4, 1.0, 400)
_SADDLE_RIGHT = np.geomspace(1e-3, 1e3, 500)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LaplaceInversion:
    """Algorithm choice and budget for :func:`inverse_laplace`.

    For ``euler-summation`` ``terms`` is the number of series terms summed
    before binomial averaging (averaging adds ``terms // 2`` more); for
    ``fixed-talbot`` it is the number of contour nodes.
    """

    method: str = "euler-summation"
    terms: int = 28
    target_rel_error: float = 1e-8

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown inversion method {self.method!r}; choose from {METHODS}")
        if int(self.terms) != self.terms or self.terms < 10:
            raise DomainError("terms must be an integer >= 10")
        if not self.target_rel_error > 0:
            raise DomainError("target_rel_error must be positive")


DEFAULT_INVERSION = LaplaceInversion()


class InversionResult(NamedTuple):
    value: float | np.ndarray
    error: float | np.ndarray


def contour_shift(abscissa: float, x=None, transform=None):
    """Real shift applied to the Laplace variable for a given singularity abscissa.

    Without ``x`` the fixed fraction is returned. With ``x`` and a
    ``transform`` that is real and positive right of ``abscissa``, each
    shift minimises ``sigma * x + log F(sigma)``; otherwise the fixed
    fraction (or zero shift for ``abscissa >= 0``) is broadcast.
    """
    base = float(abscissa) if abscissa >= 0 else SHIFT_FRACTION * abscissa
    if x is None:
        return base
    xs = np.asarray(x, dtype=float)
    fallback = np.full(xs.shape, base)
    if transform is None:
        return fallback
    if abscissa < 0:
        near = abscissa * (1.0 - _SADDLE_GAPS)
    else:
        near = abscissa + _SADDLE_GAPS
    sigma = np.concatenate([near, max(abscissa, 0.0) + _SADDLE_RIGHT])
    with np.errstate(all="ignore"):
        vals = np.asarray(transform(sigma.astype(complex))).reshape(sigma.shape).real
    ok = np.isfinite(vals) & (vals > 0)
    if not np.any(ok):
        return fallback
    sigma, log_f = sigma[ok], np.log(vals[ok])
    return sigma[np.argmin(xs[:, None] * sigma[None, :] + log_f[None, :], axis=1)]


def _euler(transform, x, cfg, shift):
    n = int(cfg.terms)
    order = max(5, n // 2)
    # Discretisation error is about exp(-A) relative; keep it well under target.
    big_a = max(18.4, -math.log(cfg.target_rel_error) + 4.6)
    k = np.arange(n + order + 1)
    p = (big_a + 2j * np.pi * k[None, :]) / (2.0 * x[:, None])
    vals = np.asarray(transform(p + shift[:, None])).real.reshape(p.shape)
    terms = (np.exp(big_a / 2.0) / x[:, None]) * np.where(k % 2 == 0, 1.0, -1.0) * vals
    terms[:, 0] *= 0.5
    partial = np.cumsum(terms, axis=1)
    weights = np.array([math.comb(order, j) for j in range(order + 1)], dtype=float) / 2.0**order
    est = partial[:, n : n + order + 1] @ weights
    prev = partial[:, n - 1 : n + order] @ weights
    scale = np.exp(shift * x)
    value = scale * est
    roundoff = scale * 64.0 * _EPS * np.abs(terms).max(axis=1)
    trunc = scale * np.abs(est - prev) + math.exp(-big_a) * np.abs(value)
    return value, trunc, roundoff


def _talbot_once(transform, x, nodes, shift):
    r = 2.0 * nodes / (5.0 * x)
    theta = np.arange(1, nodes)[None, :] * (np.pi / nodes)
    cot = 1.0 / np.tan(theta)
    s = r[:, None] * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    f_s = np.asarray(transform(s + shift[:, None])).reshape(s.shape)
    f_r = np.asarray(transform((r + shift).astype(complex))).real.reshape(r.shape)
    body = (np.exp(x[:, None] * s) * f_s * (1.0 + 1j * sigma)).real
    head = 0.5 * np.exp(r * x) * f_r
    scale = np.exp(shift * x)
    value = scale * (r / nodes) * (head + body.sum(axis=1))
    roundoff = scale * (r / nodes) * 64.0 * _EPS * np.maximum(np.abs(head), np.abs(body).max(axis=1))
    return value, roundoff


def _talbot(transform, x, cfg, shift):
    nodes = int(cfg.terms)
    value, roundoff = _talbot_once(transform, x, nodes, shift)
    coarse, _ = _talbot_once(transform, x, nodes - max(4, nodes // 4), shift)
    return value, np.abs(value - coarse), roundoff


def inverse_laplace(
    transform: Callable[[np.ndarray], np.ndarray],
    x,
    cfg: LaplaceInversion = DEFAULT_INVERSION,
    *,
    abscissa: float = 0.0,
    check: bool = True,
) -> InversionResult:
    """Invert ``transform`` at the point(s) ``x > 0``.

    Parameters
    ----------
    transform
        Vectorised callable accepting a complex ndarray of Laplace variables.
    x
        Scalar or array of positive evaluation points.
    cfg
        Algorithm, term budget and target relative error.
    abscissa
        Real part of the rightmost singularity of ``transform``. The default
        0 is safe for any transform analytic in the open right half-plane.
    check
        Raise :class:`NonConvergence` when the error estimate exceeds the
        target; with ``check=False`` the estimate is only reported.

    Returns
    -------
    InversionResult
        ``(value, error)`` with the same shape as ``x``; ``error`` sums the
        truncation and round-off estimates.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if xs.ndim != 1:
        xs_shape = xs.shape
        xs = xs.ravel()
    else:
        xs_shape = None
    if np.any(~np.isfinite(xs)) or np.any(xs <= 0):
        raise DomainError("inverse_laplace needs finite x > 0")
    shift = contour_shift(abscissa, xs, transform)
    if cfg.method == "euler-summation":
        value, trunc, roundoff = _euler(transform, xs, cfg, shift)
    else:
        value, trunc, roundoff = _talbot(transform, xs, cfg, shift)
    error = trunc + roundoff
    if check:
        bad = trunc > np.maximum(cfg.target_rel_error * np.abs(value), roundoff)
        if np.any(bad) or not np.all(np.isfinite(value)):
            worst = float(np.nanmax(np.where(bad, error, 0.0))) if np.any(bad) else float("nan")
            raise NonConvergence(
                f"Laplace inversion ({cfg.method}, {cfg.terms} terms) missed relative "
                f"target {cfg.target_rel_error:g}",
                estimate=worst,
            )
    if xs_shape is not None:
        value, error = value.reshape(xs_shape), error.reshape(xs_shape)
    if np.ndim(x) == 0:
        return InversionResult(float(value[0]), float(error[0]))
    return InversionResult(value, error)
