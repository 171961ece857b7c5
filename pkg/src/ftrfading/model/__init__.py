"""The FTR distribution core."""

from .exact import INVERSION_M_MAX, PolyCoeffs, cdf_exact, density_transform, pdf_at_zero, pdf_exact, poly_coeffs, r_factorized
from .mgf import (
    hoyt_mgf,
    hoyt_q,
    mgf,
    mgf_derivative_mean,
    mgf_independent,
    r_poly,
    rician_mgf,
    rician_shadowed_mgf,
    twdp_mgf,
)
from .densities import METHODS, cdf, envelope_cdf, envelope_pdf, pdf, resolve_method
from .mixture import MixtureCoeffs, cdf_approx, default_order, mixture_coeffs, pdf_approx
from .params import FtrParams, SpecularGeometry, geometry_to_params, params_to_geometry
from .reductions import SPECIAL_CASES, TARGETS, ReductionCase, check_reduction, reduce

__all__ = [
    "FtrParams",
    "METHODS",
    "MixtureCoeffs",
    "PolyCoeffs",
    "ReductionCase",
    "SpecularGeometry",
    "SPECIAL_CASES",
    "TARGETS",
    "cdf",
    "cdf_approx",
    "cdf_exact",
    "check_reduction",
    "default_order",
    "density_transform",
    "envelope_cdf",
    "envelope_pdf",
    "geometry_to_params",
    "hoyt_mgf",
    "hoyt_q",
    "mgf",
    "mgf_derivative_mean",
    "mgf_independent",
    "mixture_coeffs",
    "params_to_geometry",
    "pdf",
    "pdf_approx",
    "pdf_at_zero",
    "pdf_exact",
    "poly_coeffs",
    "r_factorized",
    "r_poly",
    "reduce",
    "resolve_method",
    "rician_mgf",
    "rician_shadowed_mgf",
    "twdp_mgf",
]
