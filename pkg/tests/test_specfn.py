import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ftrfading.errors import DomainError, NonConvergence
from ftrfading.specfn import (
    DEFAULT_INVERSION,
    LaplaceInversion,
    contour_shift,
    Quadrature,
    bessel_i0,
    bessel_i0e,
    gauss_2f1,
    integrate_adaptive,
    inverse_laplace,
    kummer_1f1_integer,
    lauricella_fd4,
    legendre_fn,
    legendre_poly,
    log_legendre_poly,
)
from ftrfading.specfn.legendre import legendre_recurrence, legendre_sum

mpmath.mp.dps = 40


# -- Legendre -----------------------------------------------------------------


def test_legendre_low_degrees():
    assert legendre_poly(0, 0.37) == 1.0
    assert legendre_poly(1, -2.5) == -2.5


def test_legendre_sum_matches_recurrence_degree_five():
    assert legendre_sum(5, 1.2) == pytest.approx(legendre_recurrence(5, 1.2), rel=1e-14)
    assert legendre_poly(5, 1.2) == pytest.approx(float(mpmath.legendre(5, 1.2)), rel=1e-14)


def test_legendre_against_high_precision_up_to_degree_30():
    rng = np.random.default_rng(3)
    for n in range(31):
        for z in rng.uniform(-10, 10, 25):
            ref = float(mpmath.legendre(n, z))
            if abs(ref) < 1e-3:
                continue  # relative error is meaningless right at a root
            assert legendre_poly(n, z) == pytest.approx(ref, rel=1e-12)


def test_legendre_sum_and_recurrence_agree():
    z = np.linspace(1.0, 10.0, 50)
    for n in range(11):
        np.testing.assert_allclose(legendre_sum(n, z), legendre_recurrence(n, z), rtol=1e-12)


@given(st.integers(min_value=0, max_value=50))
def test_legendre_at_one_is_one(n):
    assert legendre_poly(n, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_legendre_vectorised_and_errors():
    z = np.array([0.5, 1.5, 3.0])
    np.testing.assert_allclose(legendre_poly(4, z), [float(mpmath.legendre(4, v)) for v in z], rtol=1e-13)
    with pytest.raises(DomainError):
        legendre_poly(-1, 0.5)
    with pytest.raises(DomainError):
        legendre_poly(2, float("nan"))


def test_log_legendre_large_degree():
    for n, z in [(200, 1.3), (5000, 1.001), (9999, 2.0)]:
        ref = float(mpmath.log(mpmath.legendre(n, z)))
        assert log_legendre_poly(n, z) == pytest.approx(ref, rel=1e-11)


def test_legendre_fn_examples():
    assert legendre_fn(2.5, 1.0) == 1.0
    assert legendre_fn(3, 0.8) == pytest.approx(legendre_poly(3, 0.8), rel=1e-12)
    ref = float(mpmath.hyp2f1(-1.5, 2.5, 1, (1 - 1.4) / 2))
    assert legendre_fn(1.5, 1.4) == pytest.approx(ref, rel=1e-10)


def test_legendre_fn_integer_degrees_match_polynomials():
    for n in range(8):
        for z in np.linspace(-0.99, 2.99, 23):
            ref = legendre_poly(n, z)
            assert legendre_fn(n, z) == pytest.approx(ref, rel=1e-10, abs=1e-13)


def test_legendre_fn_rejects_outside_region():
    with pytest.raises(DomainError):
        legendre_fn(0.5, 3.0)
    with pytest.raises(DomainError):
        legendre_fn(0.5, -1.0)


# -- hypergeometric -----------------------------------------------------------


def test_gauss_2f1_trivial_and_log_identity():
    assert gauss_2f1(0.3, -2.7, 4.1, 0.0) == 1.0
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)


def test_gauss_2f1_against_circle_average():
    # 2F1(m, m; 1; x) = (1/2pi) int_0^{2pi} (1 - 2 sqrt(x) cos t + x)^(-m) dt
    m, x = 3, 0.2
    ref = integrate.quad(lambda t: (1 - 2 * math.sqrt(x) * math.cos(t) + x) ** (-m), 0, 2 * math.pi, epsabs=1e-14)[0]
    assert gauss_2f1(m, m, 1, x) == pytest.approx(ref / (2 * math.pi), rel=1e-12)


@pytest.mark.parametrize(
    "a,b,c,x",
    [(2.5, 2.5, 1, 0.93), (0.7, -1.3, 2.2, -0.8), (-3, 1.5, 0.5, 0.6), (2.5, 1.2, 0.5, 0.4), (4, 4, 1, 0.99)],
)
def test_gauss_2f1_against_mpmath(a, b, c, x):
    assert gauss_2f1(a, b, c, x) == pytest.approx(float(mpmath.hyp2f1(a, b, c, x)), rel=1e-11)


def test_gauss_2f1_errors():
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 2, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, -2, 0.5)
    with pytest.raises(NonConvergence):
        gauss_2f1(1, 1, 2, 0.9999999, tol=1e-300)


def test_kummer_examples():
    assert kummer_1f1_integer(1, 0.4) == pytest.approx(math.exp(0.4), rel=1e-15)
    assert kummer_1f1_integer(2, 1.0) == pytest.approx(2 * math.e, rel=1e-15)
    assert kummer_1f1_integer(5, 0.7) == pytest.approx(float(mpmath.hyp1f1(5, 1, 0.7)), rel=1e-13)


@given(st.integers(min_value=1, max_value=50))
def test_kummer_at_zero(m):
    assert kummer_1f1_integer(m, 0.0) == 1.0


def test_kummer_rejects_non_integer():
    with pytest.raises(DomainError):
        kummer_1f1_integer(1.5, 0.1)


# -- Bessel -------------------------------------------------------------------


def test_bessel_i0_values():
    assert bessel_i0(0.0) == 1.0
    series = sum((0.25) ** k / math.factorial(k) ** 2 for k in range(30))
    assert bessel_i0(1.0) == pytest.approx(series, rel=1e-15)
    assert bessel_i0(-2.3) == bessel_i0(2.3)


def test_bessel_i0_relative_accuracy_to_700():
    for x in np.concatenate([np.linspace(0, 40, 161), np.linspace(40, 700, 67)]):
        ref = mpmath.besseli(0, x)
        assert bessel_i0(x) == pytest.approx(float(ref), rel=1e-12)
        assert bessel_i0e(x) == pytest.approx(float(ref * mpmath.exp(-x)), rel=1e-12)


def test_bessel_i0_overflow():
    with pytest.raises(OverflowError):
        bessel_i0(720.0)
    assert math.isfinite(bessel_i0e(1e5))


# -- Lauricella ---------------------------------------------------------------


def test_lauricella_trivial_cases():
    quad = Quadrature()
    assert lauricella_fd4(1.5, (0, 0, 0, 0), 2.0, (-0.3, -0.2, -0.1, -0.5), quad) == pytest.approx(1.0, abs=1e-12)
    assert lauricella_fd4(1.5, (1, 2, -1, 0.5), 2.0, (0, 0, 0, 0), quad) == pytest.approx(1.0, abs=1e-12)


def test_lauricella_against_monte_carlo_and_mpmath():
    a, b, c, x = 1.5, (-1.0, 0.5, 0.5, 0.0), 2.0, (-0.3, -0.2, -0.1, -0.5)
    val = lauricella_fd4(a, b, c, x, Quadrature())
    rng = np.random.default_rng(12)
    t = rng.beta(a, c - a, 10**6)
    f = np.prod([(1 - xi * t) ** (-bi) for xi, bi in zip(x, b)], axis=0)
    assert abs(val - f.mean()) < 4 * f.std() / math.sqrt(t.size)
    pref = mpmath.gamma(c) / (mpmath.gamma(a) * mpmath.gamma(c - a))
    ref = pref * mpmath.quad(
        lambda s: s ** (a - 1) * (1 - s) ** (c - a - 1) * mpmath.fprod((1 - xi * s) ** (-bi) for xi, bi in zip(x, b)),
        [0, 1],
    )
    assert val == pytest.approx(float(ref), rel=1e-11)


def test_lauricella_errors():
    with pytest.raises(DomainError):
        lauricella_fd4(1.5, (1, 1, 1, 1), 2.0, (0.1, 0.2, 1.0, 0.0), Quadrature())
    with pytest.raises(DomainError):
        lauricella_fd4(2.0, (1, 1, 1, 1), 1.5, (0.1, 0.2, 0.3, 0.0), Quadrature())
    with pytest.raises(DomainError):
        lauricella_fd4(1.5, (1, 1, 1), 2.0, (0.1, 0.2, 0.3), Quadrature())


# -- quadrature ---------------------------------------------------------------


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        Quadrature(abs_tol=0)
    with pytest.raises(DomainError):
        Quadrature(max_subdivisions=0)


def test_integrate_adaptive():
    val, err = integrate_adaptive(math.exp, 0.0, 1.0)
    assert val == pytest.approx(math.e - 1, rel=1e-14)
    assert err < 1e-12
    with pytest.raises(NonConvergence):
        integrate_adaptive(lambda t: math.sin(1 / t) / t, 1e-8, 1.0, Quadrature(1e-14, 1e-14, 3))


# -- Laplace inversion --------------------------------------------------------


METHODS = ["euler-summation", "fixed-talbot"]


def test_inversion_config_validation():
    with pytest.raises(DomainError):
        LaplaceInversion(terms=9)
    with pytest.raises(DomainError):
        LaplaceInversion(method="stehfest")
    with pytest.raises(DomainError):
        LaplaceInversion(target_rel_error=0)


@pytest.mark.parametrize("method", METHODS)
def test_inversion_exponential_pair(method):
    beta = (1 + 15.0) / 1.0
    cfg = LaplaceInversion(method)
    x = np.array([0.01, 0.1, 0.5, 1.0, 2.0])
    res = inverse_laplace(lambda s: 1 / (s + beta), x, cfg, abscissa=-beta)
    np.testing.assert_allclose(res.value, np.exp(-beta * x), rtol=1e-8)
    assert np.all(res.error >= 0)


@pytest.mark.parametrize("method", METHODS)
def test_inversion_ramp(method):
    res = inverse_laplace(lambda s: 1 / s**2, 2.0, LaplaceInversion(method))
    assert isinstance(res.value, float)
    assert res.value == pytest.approx(2.0, rel=1e-8)


@pytest.mark.parametrize("method", METHODS)
def test_inversion_unit_exponential_sup_norm(method):
    x = np.linspace(0.01, 10, 400)
    res = inverse_laplace(lambda s: 1 / (1 + s), x, LaplaceInversion(method), abscissa=-1.0)
    assert np.max(np.abs(res.value - np.exp(-x))) <= 1e-7
    # Without the abscissa the tail misses the relative target but stays
    # accurate in absolute terms.
    res = inverse_laplace(lambda s: 1 / (1 + s), x, LaplaceInversion(method), check=False)
    assert np.max(np.abs(res.value - np.exp(-x))) <= 1e-7


@pytest.mark.parametrize(
    "method,order",
    [("euler-summation", 1), ("euler-summation", 8), ("euler-summation", 60), ("fixed-talbot", 1), ("fixed-talbot", 8)],
)
def test_inversion_high_order_pole(method, order):
    # 1/(1+s)^n is the transform of the Gamma(n, 1) density.
    x = np.linspace(0.5, 3.0 * order, 60)
    res = inverse_laplace(lambda s: (1.0 + s) ** -order, x, LaplaceInversion(method, terms=40), abscissa=-1.0)
    expected = np.exp((order - 1) * np.log(x) - x - math.lgamma(order))
    np.testing.assert_allclose(res.value, expected, rtol=1e-7)


def test_contour_shift_sits_at_saddle():
    # sigma x - log(1 + sigma) is smallest at sigma = 1/x - 1.
    x = np.array([0.2, 0.5, 1.0, 3.0, 10.0])
    shift = contour_shift(-1.0, x, lambda s: 1.0 / (1.0 + s))
    np.testing.assert_allclose(shift, 1.0 / x - 1.0, rtol=0.03, atol=2e-3)
    assert contour_shift(-1.0) == pytest.approx(-0.8)
    np.testing.assert_allclose(contour_shift(-1.0, x), -0.8)


def test_inversion_reports_failure():
    cfg = LaplaceInversion(terms=10, target_rel_error=1e-15)
    with pytest.raises(NonConvergence) as info:
        inverse_laplace(lambda s: 1 / np.sqrt(s + 1), 3.0, cfg)
    assert info.value.estimate > 0
    res = inverse_laplace(lambda s: 1 / np.sqrt(s + 1), 3.0, cfg, check=False)
    assert res.error > 0


def test_inversion_rejects_bad_points():
    with pytest.raises(DomainError):
        inverse_laplace(lambda s: 1 / s, 0.0, DEFAULT_INVERSION)
