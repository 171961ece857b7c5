"""Classical fading models contained in FTR as special or limiting cases.

Limiting cells (K -> inf, m -> inf) are exercised at finite surrogate
values ``K_LIMIT`` and ``M_LIMIT`` with a looser tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable

import numpy as np
from scipy import integrate, special

from ..errors import DomainError
from .mgf import (
    hoyt_mgf,
    hoyt_q,
    mgf,
    nakagami_mgf,
    one_sided_gaussian_mgf,
    rayleigh_mgf,
    rician_mgf,
    rician_shadowed_mgf,
    twdp_mgf,
)
from .params import FtrParams

K_LIMIT = 1e6
M_LIMIT = 1e4
FINITE_TOL = 1e-9
LIMIT_TOL = 1e-3

TARGETS = (
    "rayleigh",
    "rician",
    "rician_shadowed",
    "hoyt",
    "nakagami_m",
    "twdp",
    "one_sided_gaussian",
    "two_wave",
    "fluctuating_two_wave",
)


def _big_k(p):
    return p.K >= K_LIMIT


def _big_m(p):
    return p.m >= M_LIMIT


def two_wave_mgf(Delta: float, gamma_bar: float, s: float) -> float:
    """MGF of two constant-amplitude waves without diffuse power."""
    a = gamma_bar * s
    return math.exp(a + abs(Delta * a)) * float(special.i0e(Delta * a))


def fluctuating_two_wave_mgf(Delta: float, m: float, gamma_bar: float, s: float) -> float:
    """Two-wave MGF averaged over a unit-mean Gamma(m) power scaling, by quadrature."""
    if s == 0:
        return 1.0

    def integrand(z):
        dens = math.exp(special.xlogy(m - 1, z) + m * math.log(m) - m * z - special.gammaln(m))
        return dens * two_wave_mgf(Delta, gamma_bar * z, s)

    return integrate.quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)[0]


def reduce(p: FtrParams, target: str) -> Callable[[float], float]:
    """Independent closed-form MGF of ``target`` for parameters in its cell.

    Raises :class:`DomainError` when ``p`` does not lie in (or at the
    surrogate of) the requested cell.
    """
    g = p.gamma_bar
    if target == "rayleigh":
        if p.Delta == 0 and (p.K == 0 or (_big_k(p) and p.m == 1)):
            return partial(rayleigh_mgf, g)
    elif target == "rician":
        if p.Delta == 0 and _big_m(p):
            return partial(rician_mgf, p.K, g)
    elif target == "rician_shadowed":
        if p.Delta == 0 and math.isfinite(p.m):
            return partial(rician_shadowed_mgf, p.K, p.m, g)
    elif target == "hoyt":
        if p.m == 1:
            return partial(hoyt_mgf, hoyt_q(p), g)
        if p.Delta == 0 and p.m == 0.5:
            return partial(hoyt_mgf, 1.0 / math.sqrt(1.0 + 2.0 * p.K), g)
    elif target == "nakagami_m":
        if p.Delta == 0 and _big_k(p):
            return partial(nakagami_mgf, p.m, g)
    elif target == "twdp":
        if _big_m(p):
            return partial(twdp_mgf, p.K, p.Delta, g)
    elif target == "one_sided_gaussian":
        if _big_k(p) and ((p.Delta == 0 and p.m == 0.5) or (p.Delta == 1 and p.m == 1)):
            return partial(one_sided_gaussian_mgf, g)
    elif target == "two_wave":
        if _big_k(p) and _big_m(p):
            return partial(two_wave_mgf, p.Delta, g)
    elif target == "fluctuating_two_wave":
        if _big_k(p) and math.isfinite(p.m):
            return partial(fluctuating_two_wave_mgf, p.Delta, p.m, g)
    else:
        raise DomainError(f"unknown reduction target {target!r}; choose from {TARGETS}")
    raise DomainError(f"{p} does not lie in the {target} cell")


@dataclass(frozen=True)
class ReductionCase:
    target: str
    label: str
    params: FtrParams
    tol: float


def _q_to_k(q):
    return (1.0 - q * q) / (2.0 * q * q)


SPECIAL_CASES = (
    ReductionCase("one_sided_gaussian", "a: Delta=0, K->inf, m=0.5", FtrParams(K_LIMIT, 0.0, 0.5, 1.0), LIMIT_TOL),
    ReductionCase("one_sided_gaussian", "b: Delta=1, K->inf, m=1", FtrParams(K_LIMIT, 1.0, 1, 1.0), LIMIT_TOL),
    ReductionCase("rayleigh", "a: Delta=0, K->inf, m=1", FtrParams(K_LIMIT, 0.0, 1, 1.5), LIMIT_TOL),
    ReductionCase("rayleigh", "b: Delta=0, K=0, any m", FtrParams(0.0, 0.0, 7, 2.0), FINITE_TOL),
    ReductionCase("hoyt", "a: Delta=0, K=(1-q^2)/(2q^2), m=0.5", FtrParams(_q_to_k(0.4), 0.0, 0.5, 1.0), FINITE_TOL),
    ReductionCase("hoyt", "b: any K, Delta, m=1", FtrParams(5.0, 0.6, 1, 1.0), FINITE_TOL),
    ReductionCase("nakagami_m", "Delta=0, K->inf, m", FtrParams(K_LIMIT, 0.0, 3, 1.0), LIMIT_TOL),
    ReductionCase("rician", "Delta=0, K, m->inf", FtrParams(4.0, 0.0, int(M_LIMIT), 1.0), LIMIT_TOL),
    ReductionCase("rician_shadowed", "Delta=0, K, m", FtrParams(4.0, 0.0, 3, 1.0), FINITE_TOL),
    ReductionCase("twdp", "Delta, K, m->inf", FtrParams(6.0, 0.7, int(M_LIMIT), 1.0), LIMIT_TOL),
    ReductionCase("two_wave", "Delta, K->inf, m->inf", FtrParams(K_LIMIT, 0.6, int(M_LIMIT), 1.0), LIMIT_TOL),
    ReductionCase("fluctuating_two_wave", "Delta, K->inf, m", FtrParams(K_LIMIT, 0.6, 3, 1.0), LIMIT_TOL),
)

CHECK_POINTS = (-20.0, -10.0, -4.0, -2.0, -1.0, -0.5, -0.25, -0.1, -0.01, 0.0)


def check_reduction(case: ReductionCase, s_points=CHECK_POINTS) -> float:
    """Largest absolute MGF discrepancy between FTR and the reference over ``s_points``."""
    ref = reduce(case.params, case.target)
    s = np.asarray(s_points, dtype=float) / case.params.gamma_bar
    ftr = mgf(case.params, s)
    return float(np.max(np.abs(ftr - np.array([ref(v) for v in s]))))
