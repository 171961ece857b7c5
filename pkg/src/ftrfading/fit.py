"""Fitting FTR and Rician envelope laws to an empirical CDF.

The objective is the largest absolute gap between the base-10 logarithms
of the empirical and model CDFs over the empirical support points, which
weights the lower tail much more than the classical KS distance does.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize

from .errors import DomainError, NoFit, NonConvergence
from .model import FtrParams, cdf_exact

MIN_POINTS = 10


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted ``(amplitude, probability)`` pairs.

    ``second_moment`` is ``E{r^2}`` when known (e.g. from raw samples);
    otherwise it is estimated from the points.
    """

    amplitude: np.ndarray
    probability: np.ndarray
    second_moment: float | None = None

    def __post_init__(self):
        a = np.asarray(self.amplitude, dtype=float)
        f = np.asarray(self.probability, dtype=float)
        if a.ndim != 1 or a.shape != f.shape:
            raise DomainError("amplitude and probability must be 1-D and of equal length")
        if a.size < MIN_POINTS:
            raise DomainError(f"an empirical CDF needs at least {MIN_POINTS} points, got {a.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(f))):
            raise DomainError("empirical CDF values must be finite")
        if np.any(a <= 0) or np.any(np.diff(a) <= 0):
            raise DomainError("amplitudes must be positive and strictly increasing")
        if np.any(f <= 0) or np.any(f > 1) or np.any(np.diff(f) < 0):
            raise DomainError("probabilities must lie in (0, 1] and be non-decreasing")
        if self.second_moment is not None and not (self.second_moment > 0 and math.isfinite(self.second_moment)):
            raise DomainError("second moment must be positive")
        a.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "amplitude", a)
        object.__setattr__(self, "probability", f)

    @classmethod
    def from_samples(cls, envelope, n_points: int = 200, min_count: int = 1000) -> EmpiricalCdf:
        """ECDF at order statistics whose ranks are log-spaced from ``min_count`` to ``n``.

        Starting at ``min_count`` keeps the relative noise of the lowest
        probability near ``1/sqrt(min_count)``.
        """
        r = np.sort(np.asarray(envelope, dtype=float))
        n = r.size
        if n < MIN_POINTS:
            raise DomainError(f"need at least {MIN_POINTS} samples")
        lo = max(1, min(min_count, n // MIN_POINTS))
        ranks = np.unique(np.round(np.geomspace(lo, n, n_points)).astype(np.int64))
        amp = r[ranks - 1]
        keep = np.concatenate([np.diff(amp) > 0, [True]])  # drop ties, keep the top rank
        return cls(amp[keep], ranks[keep] / n, float(np.mean(r * r)))

    @property
    def omega(self) -> float:
        """``E{r^2}``: the stored value or a Stieltjes sum over the points."""
        if self.second_moment is not None:
            return float(self.second_moment)
        a, f = self.amplitude, self.probability
        mid = np.concatenate([[0.5 * a[0] ** 2], 0.5 * (a[1:] ** 2 + a[:-1] ** 2)])
        return float(np.sum(mid * np.diff(np.concatenate([[0.0], f]))) / f[-1])

    def scaled(self, factor: float) -> EmpiricalCdf:
        """Same CDF with amplitudes multiplied by ``factor``."""
        sm = None if self.second_moment is None else self.second_moment * factor**2
        return EmpiricalCdf(self.amplitude * factor, self.probability, sm)

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["amplitude", "cdf"])
        for a, f in zip(self.amplitude, self.probability):
            w.writerow([f"{a:.17g}", f"{f:.17g}"])

    @classmethod
    def from_csv(cls, fh, second_moment: float | None = None) -> EmpiricalCdf:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["amplitude", "cdf"]:
            raise DomainError("empirical CDF CSV must start with the header 'amplitude,cdf'")
        rows = [row for row in reader if row and any(c.strip() for c in row)]
        try:
            data = np.array([[float(a), float(b)] for a, b in rows])
        except ValueError as exc:
            raise DomainError(f"bad empirical CDF row: {exc}") from None
        if data.size == 0:
            raise DomainError("empirical CDF CSV has no rows")
        return cls(data[:, 0], data[:, 1], second_moment)


def model_envelope_cdf(emp: EmpiricalCdf, p: FtrParams) -> np.ndarray:
    """Model amplitude CDF ``F_gamma(r^2)`` at the empirical points (``gamma_bar`` read as Omega)."""
    return np.asarray(cdf_exact(p, emp.amplitude**2))


def epsilon(emp: EmpiricalCdf, p: FtrParams) -> float:
    """``max |log10 F_emp - log10 F_model|`` over the empirical support points."""
    model = model_envelope_cdf(emp, p)
    if np.any(model <= 0):
        r = emp.amplitude[np.argmax(model <= 0)]
        raise DomainError(f"model CDF vanishes at amplitude {r:g}; log error undefined")
    return float(np.max(np.abs(np.log10(emp.probability) - np.log10(model))))


def _default_k_grid():
    return tuple(np.geomspace(0.1, 200.0, 40))


@dataclass(frozen=True)
class SearchConfig:
    """Search grid and refinement settings shared by the FTR and Rician fits."""

    k_grid: tuple = field(default_factory=_default_k_grid)
    delta_grid: tuple = tuple(np.round(np.arange(21) * 0.05, 10))
    m_candidates: tuple = tuple(range(1, 13)) + (15, 20)
    rician_k_grid: tuple = field(default_factory=lambda: (0.0,) + tuple(np.geomspace(1e-3, 200.0, 60)))
    include_rician: bool = True
    refine: bool = True
    refine_max_evals: int = 150
    k_max: float = 1e4

    def __post_init__(self):
        for name in ("k_grid", "delta_grid", "m_candidates", "rician_k_grid"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise DomainError(f"{name} must not be empty")
            object.__setattr__(self, name, vals)
        if any(k <= 0 for k in self.k_grid):
            raise DomainError("k_grid values must be positive (K is searched in log scale)")
        if any(not 0 <= d <= 1 for d in self.delta_grid):
            raise DomainError("delta_grid values must lie in [0, 1]")
        if any(m <= 0 or not float(m).is_integer() for m in self.m_candidates):
            raise DomainError("m candidates must be positive integers")
        object.__setattr__(self, "m_candidates", tuple(int(m) for m in self.m_candidates))
        if self.refine_max_evals < 0:
            raise DomainError("refine_max_evals must be >= 0")


@dataclass(frozen=True)
class FitResult:
    """Best parameters (``gamma_bar`` holds Omega), their error factor and the evaluation count."""

    params: FtrParams
    epsilon: float
    evaluations: int

    def to_dict(self) -> dict:
        m = self.params.m
        return {
            "K": self.params.K,
            "Delta": self.params.Delta,
            "m": m if math.isfinite(m) else "inf",
            "Omega": self.params.gamma_bar,
            "epsilon": self.epsilon,
            "evaluations": self.evaluations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> FitResult:
        m = math.inf if d["m"] == "inf" else d["m"]
        return cls(FtrParams(d["K"], d["Delta"], m, d["Omega"]), d["epsilon"], d["evaluations"])


class _Objective:
    """Counts evaluations and maps failures to +inf."""

    def __init__(self, emp: EmpiricalCdf, omega: float):
        self.emp = emp
        self.omega = omega
        self.calls = 0
        self.failures = 0

    def __call__(self, K: float, Delta: float, m: float) -> float:
        self.calls += 1
        try:
            return epsilon(self.emp, FtrParams(K, Delta if K > 0 else 0.0, m, self.omega))
        except (DomainError, NonConvergence):
            self.failures += 1
            return math.inf


def _key(c):
    eps, K, D, m = c
    return (eps, K, D, m)


def _best(cands):
    finite = [c for c in cands if math.isfinite(c[0])]
    return min(finite, key=_key) if finite else None


def _fit_rician(obj: _Objective, search: SearchConfig):
    cands = [(obj(K, 0.0, math.inf), K, 0.0, math.inf) for K in search.rician_k_grid]
    best = _best(cands)
    if best is None or not search.refine:
        return best, cands
    grid = sorted(search.rician_k_grid)
    i = grid.index(best[1])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda k: obj(k, 0.0, math.inf),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-6 * max(hi, 1e-3), "maxiter": max(search.refine_max_evals, 1)},
        )
        cands.append((float(res.fun), float(res.x), 0.0, math.inf))
    return _best(cands), cands


def fit_rician(emp: EmpiricalCdf, search: SearchConfig | None = None) -> FitResult:
    """Best Rician ``K`` for the data, with Omega tied to the empirical second moment."""
    search = search or SearchConfig()
    obj = _Objective(emp, emp.omega)
    best, _ = _fit_rician(obj, search)
    if best is None:
        raise NoFit(f"every one of {obj.calls} Rician evaluations failed")
    eps, K, _, _ = best
    return FitResult(FtrParams(K, 0.0, math.inf, obj.omega), eps, obj.calls)


def _refine(obj: _Objective, search: SearchConfig, K0: float, D0: float, m: int):
    lk_lo, lk_hi = math.log(min(search.k_grid)), math.log(search.k_max)

    def f(v):
        return obj(math.exp(v[0]), float(v[1]), m)

    x0 = np.array([math.log(K0), D0])
    # Simplex edges sized like one grid step in each direction.
    simplex = np.array([x0, x0 + [0.2, 0.0], x0 + [0.0, 0.05 if D0 < 0.95 else -0.05]])
    simplex[:, 0] = np.clip(simplex[:, 0], lk_lo, lk_hi)
    simplex[:, 1] = np.clip(simplex[:, 1], 0.0, 1.0)
    res = optimize.minimize(
        f,
        x0,
        method="Nelder-Mead",
        bounds=[(lk_lo, lk_hi), (0.0, 1.0)],
        options={
            "initial_simplex": simplex,
            "maxfev": search.refine_max_evals,
            "xatol": 1e-5,
            "fatol": 1e-6,
        },
    )
    return float(res.fun), math.exp(float(res.x[0])), float(res.x[1]), m


def fit_ftr(
    emp: EmpiricalCdf,
    m_candidates: Sequence[int] | None = None,
    search: SearchConfig | None = None,
) -> FitResult:
    """Minimise the log-CDF error factor over ``(K, Delta, m)``.

    A coarse grid over ``(K, Delta)`` for every candidate ``m`` is followed
    by a bounded Nelder-Mead search on ``(log K, Delta)`` from the best grid
    point of each ``m``. The Rician fit (``Delta = 0, m = inf``) and the
    Rayleigh point ``K = 0`` are always candidates, so the FTR fit is never
    worse than either. Ties break on ``(epsilon, K, Delta, m)``.
    """
    search = search or SearchConfig()
    ms = tuple(search.m_candidates if m_candidates is None else SearchConfig(m_candidates=m_candidates).m_candidates)
    obj = _Objective(emp, emp.omega)
    cands = [(obj(0.0, 0.0, 1), 0.0, 0.0, 1)]
    for m in ms:
        per_m = [(obj(K, D, m), K, D, m) for K in search.k_grid for D in search.delta_grid]
        cands.extend(per_m)
        start = _best(per_m)
        if search.refine and start is not None and search.refine_max_evals > 0:
            cands.append(_refine(obj, search, start[1], start[2], m))
    if search.include_rician:
        best_rice, _ = _fit_rician(obj, search)
        if best_rice is not None:
            cands.append(best_rice)
    best = _best(cands)
    if best is None:
        raise NoFit(f"every one of {obj.calls} model evaluations failed")
    eps, K, D, m = best
    return FitResult(FtrParams(K, D if K > 0 else 0.0, m, obj.omega), eps, obj.calls)
