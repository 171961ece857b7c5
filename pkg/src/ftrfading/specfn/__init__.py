"""Special functions and numerical-analysis building blocks."""

from .bessel import bessel_i0, bessel_i0e
from .hypergeometric import gauss_2f1, kummer_1f1_integer, lauricella_fd4
from .laplace import DEFAULT_INVERSION, InversionResult, LaplaceInversion, contour_shift, inverse_laplace
from .legendre import legendre_coefficient, legendre_fn, legendre_fn_large, legendre_poly, log_legendre_poly
from .quadrature import DEFAULT_QUADRATURE, Quadrature, integrate_adaptive

__all__ = [
    "DEFAULT_INVERSION",
    "DEFAULT_QUADRATURE",
    "InversionResult",
    "LaplaceInversion",
    "Quadrature",
    "bessel_i0",
    "bessel_i0e",
    "contour_shift",
    "gauss_2f1",
    "integrate_adaptive",
    "inverse_laplace",
    "kummer_1f1_integer",
    "lauricella_fd4",
    "legendre_coefficient",
    "legendre_fn",
    "legendre_fn_large",
    "legendre_poly",
    "log_legendre_poly",
]
