"""Seeded Monte Carlo generation of FTR channel realizations.

Samples are produced in fixed-size chunks, each driven by its own
``SeedSequence(seed, spawn_key=(chunk,))`` stream, so a batch depends only
on ``(params, config)`` and not on how many worker threads built it.
"""

from __future__ import annotations

import csv
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .model import FtrParams, params_to_geometry

CHUNK_SIZE = 1 << 17
SIGMA = 1.0 / math.sqrt(2.0)
BINARY_MAGIC = b"FTRS"
BINARY_VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


def max_threads() -> int:
    """Worker cap from ``FTR_THREADS`` (default: CPU count)."""
    raw = os.environ.get("FTR_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError as exc:
            raise DomainError(f"FTR_THREADS must be a positive integer, got {raw!r}") from exc
        if n < 1:
            raise DomainError(f"FTR_THREADS must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SampleConfig:
    """Monte Carlo run settings.

    Attributes
    ----------
    seed : int
        64-bit unsigned seed.
    n_samples : int
        Number of channel realizations.
    es_over_n0 : float, optional
        Energy-to-noise scaling applied to ``|V_r|^2``. With the internal
        ``sigma = 1/sqrt(2)`` the mean SNR is ``es_over_n0 * (1 + K)``. When
        omitted it is chosen so that the mean SNR equals ``gamma_bar``.
    """

    seed: int
    n_samples: int
    es_over_n0: float | None = None

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise DomainError("seed must be an integer")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")
        if isinstance(self.n_samples, bool) or not isinstance(self.n_samples, (int, np.integer)):
            raise DomainError("n_samples must be an integer")
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.es_over_n0 is not None and not (math.isfinite(self.es_over_n0) and self.es_over_n0 > 0):
            raise DomainError(f"es_over_n0 must be positive, got {self.es_over_n0}")

    def scaling(self, p: FtrParams) -> float:
        if self.es_over_n0 is not None:
            return float(self.es_over_n0)
        return p.gamma_bar / (2.0 * SIGMA**2 * (1.0 + p.K))


class SampleBatch(NamedTuple):
    """Realized SNR and envelope ``|V_r|`` (internal units, sigma = 1/sqrt(2))."""

    snr: np.ndarray
    envelope: np.ndarray


def _gamma(rng, m, size):
    if not math.isfinite(m):
        return np.ones(size)
    return rng.gamma(m, 1.0 / m, size)


def _chunk(p, v1, v2, seed, index, size, independent, phase_offset):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    z1 = _gamma(rng, p.m, size)
    z2 = _gamma(rng, p.m, size) if independent else z1
    phi = rng.uniform(0.0, 2.0 * np.pi, (2, size)) + phase_offset
    diffuse = rng.normal(0.0, SIGMA, (2, size))
    re = np.sqrt(z1) * v1 * np.cos(phi[0]) + np.sqrt(z2) * v2 * np.cos(phi[1]) + diffuse[0]
    im = np.sqrt(z1) * v1 * np.sin(phi[0]) + np.sqrt(z2) * v2 * np.sin(phi[1]) + diffuse[1]
    return np.hypot(re, im)


def _generate(p: FtrParams, cfg: SampleConfig, independent: bool, phase_offset: float) -> SampleBatch:
    g = params_to_geometry(p, SIGMA)
    n = int(cfg.n_samples)
    sizes = [min(CHUNK_SIZE, n - start) for start in range(0, n, CHUNK_SIZE)]
    jobs = [(p, g.V1, g.V2, int(cfg.seed), i, size, independent, phase_offset) for i, size in enumerate(sizes)]
    workers = min(max_threads(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _chunk(*a), jobs))
    else:
        parts = [_chunk(*a) for a in jobs]
    env = np.concatenate(parts)
    return SampleBatch(cfg.scaling(p) * env * env, env)


def sample_ftr(p: FtrParams, cfg: SampleConfig, *, phase_offset: float = 0.0) -> SampleBatch:
    """Realizations of the FTR model: one Gamma fluctuation shared by both waves.

    ``phase_offset`` rotates both specular phases by a common angle.
    """
    return _generate(p, cfg, False, phase_offset)


def sample_independent(p: FtrParams, cfg: SampleConfig, *, phase_offset: float = 0.0) -> SampleBatch:
    """Realizations with independent Gamma fluctuations on each specular wave."""
    return _generate(p, cfg, True, phase_offset)


def empirical_mgf(batch: SampleBatch, s: float) -> tuple[float, float]:
    """Sample mean and standard error of ``exp(s * snr)`` for ``s <= 0``."""
    if not (math.isfinite(s) and s <= 0):
        raise DomainError(f"empirical_mgf needs finite s <= 0, got {s}")
    vals = np.exp(s * np.asarray(batch.snr))
    n = vals.size
    se = float(np.std(vals, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return float(np.mean(vals)), se


def write_csv(batch: SampleBatch, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["snr", "envelope"])
        for a, b in zip(batch.snr, batch.envelope):
            w.writerow([f"{a:.17g}", f"{b:.17g}"])


def read_csv(path) -> SampleBatch:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return SampleBatch(data[:, 0].copy(), data[:, 1].copy())


def write_binary(batch: SampleBatch, path, seed: int) -> None:
    """Columnar dump: header (magic, version, n, seed) then snr and envelope as ``<f8``."""
    n = len(batch.snr)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, BINARY_VERSION, n, int(seed)))
        fh.write(np.asarray(batch.snr, dtype="<f8").tobytes())
        fh.write(np.asarray(batch.envelope, dtype="<f8").tobytes())


def read_binary(path) -> tuple[SampleBatch, int]:
    """Inverse of :func:`write_binary`; returns the batch and its seed."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise DomainError("truncated sample file header")
        magic, version, n, seed = _HEADER.unpack(head)
        if magic != BINARY_MAGIC or version != BINARY_VERSION:
            raise DomainError("not an FTR sample dump")
        body = np.frombuffer(fh.read(), dtype="<f8")
    if body.size != 2 * n:
        raise DomainError(f"sample dump holds {body.size} values, expected {2 * n}")
    return SampleBatch(body[:n].astype(float), body[n:].astype(float)), seed
