"""Model parameters and the physical geometry behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..errors import DomainError


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and math.isfinite(v)


@dataclass(frozen=True)
class FtrParams:
    """The FTR quadruple.

    Attributes
    ----------
    K : float
        Ratio of average specular power to diffuse power (linear).
    Delta : float
        Similarity of the two specular amplitudes, ``2 V1 V2 / (V1^2 + V2^2)``.
    m : float
        Fluctuation index of the unit-mean Gamma variable that scales the
        specular power. ``math.inf`` denotes the non-fluctuating limit
        (two-wave with diffuse power, or Rician when ``Delta == 0``).
    gamma_bar : float
        Average SNR (linear). In the envelope domain this plays the role of
        ``Omega = E{r^2}``.
    """

    K: float
    Delta: float
    m: float
    gamma_bar: float = 1.0

    def __post_init__(self):
        for name in ("K", "Delta", "gamma_bar"):
            if not _finite(getattr(self, name)):
                raise DomainError(f"{name} must be a finite real number")
        if not isinstance(self.m, (int, float)) or math.isnan(self.m):
            raise DomainError("m must be a real number")
        if self.K < 0:
            raise DomainError(f"K must be >= 0, got {self.K}")
        if not 0.0 <= self.Delta <= 1.0:
            raise DomainError(f"Delta must lie in [0, 1], got {self.Delta}")
        if not self.m > 0:
            raise DomainError(f"m must be > 0, got {self.m}")
        if not self.gamma_bar > 0:
            raise DomainError(f"gamma_bar must be > 0, got {self.gamma_bar}")
        if self.K == 0 and self.Delta != 0:
            raise DomainError("Delta is undefined without specular power; use Delta=0 when K=0")

    @property
    def integer_m(self) -> bool:
        return math.isfinite(self.m) and float(self.m).is_integer()

    def require_integer_m(self) -> int:
        if not self.integer_m:
            raise DomainError(f"this operation needs a positive integer m, got m={self.m}")
        return int(self.m)

    def with_gamma_bar(self, gamma_bar: float) -> "FtrParams":
        return replace(self, gamma_bar=float(gamma_bar))

    @classmethod
    def from_db(cls, K, Delta, m, gamma_bar_db) -> "FtrParams":
        return cls(K, Delta, m, 10.0 ** (gamma_bar_db / 10.0))


@dataclass(frozen=True)
class SpecularGeometry:
    """Specular amplitudes V1 >= V2 >= 0 and diffuse per-dimension std-dev sigma."""

    V1: float
    V2: float
    sigma: float

    def __post_init__(self):
        if not (_finite(self.V1) and _finite(self.V2) and _finite(self.sigma)):
            raise DomainError("geometry values must be finite")
        if self.sigma <= 0:
            raise DomainError("sigma must be > 0")
        if not self.V1 >= self.V2 >= 0:
            raise DomainError("geometry must satisfy V1 >= V2 >= 0")


def params_to_geometry(p: FtrParams, sigma: float) -> SpecularGeometry:
    """Recover (V1, V2) from K and Delta for a given diffuse std-dev.

    Solves ``V1^2 + V2^2 = 2 sigma^2 K`` and ``V1 V2 = sigma^2 K Delta``
    through ``(V1 +- V2)^2 = 2 sigma^2 K (1 +- Delta)``.
    """
    if not sigma > 0:
        raise DomainError("sigma must be > 0")
    total = 2.0 * sigma * sigma * p.K
    plus = math.sqrt(total * (1.0 + p.Delta))
    minus = math.sqrt(total * (1.0 - p.Delta))
    return SpecularGeometry(0.5 * (plus + minus), 0.5 * (plus - minus), float(sigma))


def geometry_to_params(g: SpecularGeometry, m: float, gamma_bar: float = 1.0) -> FtrParams:
    power = g.V1 * g.V1 + g.V2 * g.V2
    K = power / (2.0 * g.sigma * g.sigma)
    Delta = 2.0 * g.V1 * g.V2 / power if power > 0 else 0.0
    return FtrParams(K, min(Delta, 1.0), m, gamma_bar)
