"""Fluctuating two-ray (FTR) fading: distributions, sampling, link metrics and fitting."""

from . import fit, kernels, metrics, model, sampler, specfn
from .errors import DomainError, FtrError, NoFit, NonConvergence, PrecisionWarning
from .model import FtrParams, cdf, mgf, pdf

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "FtrError",
    "FtrParams",
    "NoFit",
    "NonConvergence",
    "PrecisionWarning",
    "cdf",
    "fit",
    "kernels",
    "metrics",
    "mgf",
    "model",
    "pdf",
    "sampler",
    "specfn",
]
