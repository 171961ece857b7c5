"""Average bit error rate and outage probability over FTR fading."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np
from scipy import special

from .errors import DomainError
from .model import FtrParams, cdf_exact, pdf_at_zero, pdf_exact, poly_coeffs
from .sampler import SampleBatch, SampleConfig, sample_ftr
from .specfn import (
    DEFAULT_INVERSION,
    DEFAULT_QUADRATURE,
    LaplaceInversion,
    Quadrature,
    integrate_adaptive,
    lauricella_fd4,
    legendre_coefficient,
    legendre_poly,
)


@dataclass(frozen=True)
class CepFamily:
    """Conditional error probability ``sum_r alpha_r Q(sqrt(beta_r x))``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(a), float(b)) for a, b in self.terms)
        if not terms:
            raise DomainError("a CEP family needs at least one (alpha, beta) term")
        for a, b in terms:
            if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
                raise DomainError(f"CEP constants must be positive, got ({a}, {b})")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def bpsk(cls) -> CepFamily:
        return cls(((1.0, 2.0),))

    @classmethod
    def bfsk(cls) -> CepFamily:
        """Coherent orthogonal BFSK."""
        return cls(((1.0, 1.0),))

    @classmethod
    def named(cls, name: str) -> CepFamily:
        try:
            return {"bpsk": cls.bpsk, "bfsk": cls.bfsk}[name.lower()]()
        except KeyError:
            raise DomainError(f"unknown modulation {name!r}; choose bpsk or bfsk") from None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sum(a * special.ndtr(-np.sqrt(b * x)) for a, b in self.terms)


BPSK = CepFamily.bpsk()


@dataclass(frozen=True)
class OutageSpec:
    rate_threshold: float

    def __post_init__(self):
        if not (math.isfinite(self.rate_threshold) and self.rate_threshold > 0):
            raise DomainError(f"rate threshold must be positive, got {self.rate_threshold}")

    @property
    def snr_threshold(self) -> float:
        return math.expm1(self.rate_threshold * math.log(2.0))


def ber_exact(p: FtrParams, cep: CepFamily = BPSK, quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """Average error rate as a sum of four-variable Lauricella functions.

    Each Legendre term of the CDF pairs with the CEP derivative through an
    Euler integral of ``F_D^(4)(3/2; b; 2; x)``.
    """
    m = p.require_integer_m()
    K, D, g = p.K, p.Delta, p.gamma_bar
    c = poly_coeffs(p)
    root = math.sqrt((m + K) ** 2 - (K * D) ** 2)
    z0 = (m + K) / root
    lead = (1 + K) / g * (m / root) ** m / 2 ** (m - 1)
    total = 0.0
    for q in range((m - 1) // 2 + 1):
        b = (1 + 2 * q - m, m - q - 0.5, m - q - 0.5, 1 - m)
        weight = (-1) ** q * legendre_coefficient(m - 1, q) * z0 ** (m - 1 - 2 * q)
        inner = 0.0
        for alpha, beta in cep.terms:
            x = tuple(-2.0 * a / beta for a in (c.a1, c.a2, c.a3, c.a4))
            inner += alpha / (2.0 * beta) * lauricella_fd4(1.5, b, 2.0, x, quad)
        total += weight * inner
    return lead * total


def ber_quadrature(
    p: FtrParams,
    cep: CepFamily = BPSK,
    cfg: LaplaceInversion = DEFAULT_INVERSION,
    quad: Quadrature | None = None,
) -> float:
    """Average error rate by integrating the CEP against the exact density.

    The default tolerances sit just above the inversion's own accuracy.
    """
    if quad is None:
        quad = Quadrature(abs_tol=1e-16, rel_tol=1e-9)
    beta_min = min(b for _, b in cep.terms)
    upper = 90.0 / beta_min  # Q(sqrt(90)) ~ 1e-21

    def integrand(x):
        return float(cep(x)) * pdf_exact(p, x, cfg)

    # Split where the density has most of its mass to help the adaptive rule.
    knee = min(upper, 10.0 * p.gamma_bar)
    parts = [(0.0, knee), (knee, upper)] if knee < upper else [(0.0, upper)]
    return sum(integrate_adaptive(integrand, lo, hi, quad)[0] for lo, hi in parts)


def ber_asymptotic(p: FtrParams, cep: CepFamily = BPSK) -> float:
    """High-SNR error rate, exactly proportional to ``1/gamma_bar``."""
    m = p.require_integer_m()
    K, D = p.K, p.Delta
    root = math.sqrt((m + K) ** 2 - (D * K) ** 2)
    ratio = sum(a / b for a, b in cep.terms)
    return m**m * (1 + K) / (2.0 * root**m) * ratio * legendre_poly(m - 1, (m + K) / root) / p.gamma_bar


class McEstimate(NamedTuple):
    value: float
    std_error: float


def ber_monte_carlo(batch: SampleBatch, cep: CepFamily = BPSK) -> McEstimate:
    """Semi-analytic error rate: the exact CEP averaged over sampled SNRs."""
    vals = cep(batch.snr)
    n = vals.size
    return McEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0)


def outage_probability(p: FtrParams, spec: OutageSpec, cfg: LaplaceInversion = DEFAULT_INVERSION) -> float:
    """``P(log2(1 + gamma) < R_S) = F_gamma(2^R_S - 1)``."""
    return cdf_exact(p, spec.snr_threshold, cfg)


def outage_asymptotic(p: FtrParams, spec: OutageSpec) -> float:
    """High-SNR outage, ``f_gamma(0) (2^R_S - 1)``."""
    p.require_integer_m()
    return pdf_at_zero(p) * spec.snr_threshold


def outage_monte_carlo(batch: SampleBatch, spec: OutageSpec) -> McEstimate:
    """Fraction of sampled SNRs below the outage threshold."""
    n = batch.snr.size
    frac = float(np.count_nonzero(batch.snr < spec.snr_threshold)) / n
    return McEstimate(frac, math.sqrt(frac * (1.0 - frac) / n))


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(lin):
    return 10.0 * np.log10(np.asarray(lin, dtype=float))


def gamma_grid(values: Iterable[float], unit: str = "db") -> tuple[np.ndarray, np.ndarray]:
    """Return ``(gamma_db, gamma_linear)`` for values given in ``unit``."""
    v = np.asarray(list(values), dtype=float)
    if unit == "db":
        return v, db_to_linear(v)
    if unit == "linear":
        if np.any(v <= 0):
            raise DomainError("linear average SNR values must be positive")
        return linear_to_db(v), v
    raise DomainError(f"unit must be 'db' or 'linear', got {unit!r}")


class SweepRow(NamedTuple):
    gamma_bar_db: float
    value: float
    method: str


def sweep(
    p: FtrParams,
    metric: Callable[[FtrParams], float],
    gammas: Iterable[float],
    unit: str = "db",
    method: str = "exact",
) -> list[SweepRow]:
    """Evaluate ``metric`` over an average-SNR grid."""
    db, lin = gamma_grid(gammas, unit)
    return [SweepRow(float(d), float(metric(p.with_gamma_bar(float(g)))), method) for d, g in zip(db, lin)]


def monte_carlo_sweep(
    p: FtrParams,
    estimator: Callable[[SampleBatch], McEstimate],
    gammas: Iterable[float],
    cfg: SampleConfig,
    unit: str = "db",
) -> list[SweepRow]:
    """Monte Carlo sweep reusing one set of channel draws rescaled per SNR.

    Emits ``mc`` and ``mc_se`` rows for every grid point.
    """
    db, lin = gamma_grid(gammas, unit)
    base = sample_ftr(p.with_gamma_bar(1.0), SampleConfig(cfg.seed, cfg.n_samples))
    rows = []
    for d, g in zip(db, lin):
        est = estimator(SampleBatch(base.snr * g, base.envelope))
        rows.append(SweepRow(float(d), est.value, "mc"))
        rows.append(SweepRow(float(d), est.std_error, "mc_se"))
    return rows


def write_sweep_csv(rows: Iterable[SweepRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["gamma_bar_db", "value", "method"])
    for r in rows:
        w.writerow([f"{r.gamma_bar_db:.17g}", f"{r.value:.17g}", r.method])
