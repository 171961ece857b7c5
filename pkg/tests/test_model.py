import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from conftest import dkw_epsilon, exact_cdf_fn, ks_upper_bound
from ftrfading.errors import DomainError, PrecisionWarning
from ftrfading.model import (
    SPECIAL_CASES,
    FtrParams,
    SpecularGeometry,
    cdf,
    cdf_approx,
    cdf_exact,
    check_reduction,
    default_order,
    envelope_cdf,
    envelope_pdf,
    geometry_to_params,
    hoyt_mgf,
    hoyt_q,
    mgf,
    mgf_derivative_mean,
    mgf_independent,
    mixture_coeffs,
    params_to_geometry,
    pdf,
    pdf_approx,
    pdf_at_zero,
    pdf_exact,
    poly_coeffs,
    r_factorized,
    r_poly,
    reduce,
    resolve_method,
    rician_shadowed_mgf,
)
from ftrfading.model.mixture import MixtureCoeffs, exact_weights, rician_shadowed_pdf, rician_shadowed_sf
from ftrfading.sampler import SampleConfig, empirical_mgf, sample_ftr
from ftrfading.specfn import LaplaceInversion, legendre_coefficient

REF = FtrParams(15, 0.9, 5, 1.0)


# -- independent oracles ------------------------------------------------------


def gamma_averaged_mgf(p, s):
    """MGF as the Gamma(m) average of the constant-amplitude conditional MGF."""
    K, D, m, g = p.K, p.Delta, p.m, p.gamma_bar
    B = (1 + K) / (1 + K - g * s)
    A = K * g * s / (1 + K - g * s)

    def smooth(u):
        # Gamma density without the u^(m-1) factor, times the conditional MGF
        return math.exp(m * math.log(m) - m * u - math.lgamma(m) + u * A + abs(u * D * A)) * special.i0e(u * D * A)

    head = integrate.quad(smooth, 0, 1, weight="alg", wvar=(m - 1, 0), epsabs=1e-15, epsrel=1e-12)[0]
    tail = integrate.quad(lambda u: u ** (m - 1) * smooth(u), 1, np.inf, epsabs=1e-15, epsrel=1e-12, limit=400)[0]
    return B * (head + tail)


def mgf_literal_factorized(p, s):
    """The MGF written over the four constants a1..a4 term by term (real s < 0)."""
    m = int(p.m)
    c = poly_coeffs(p)
    a1, a2, a3, a4 = c.a1, c.a2, c.a3, c.a4
    total = 0.0
    for q in range((m - 1) // 2 + 1):
        total += (
            (-1) ** q
            * legendre_coefficient(m - 1, q)
            * (math.sqrt(a2 * a3) / a1) ** (m - 1 - 2 * q)
            / s
            * (1 - a1 / s) ** (m - 1 - 2 * q)
            * (1 - a2 / s) ** (0.5 + q - m)
            * (1 - a3 / s) ** (0.5 + q - m)
            * (1 - a4 / s) ** (m - 1)
        )
    return -((a2 * a3) ** (m / 2)) / (2 * a4) ** (m - 1) * total


def g_literal(x, beta, K, m):
    return (
        (m / (K + m)) ** m
        * beta
        * math.exp(-beta * x * m / (K + m))
        * sum(math.comb(m - 1, n) * (K * beta * x / (K + m)) ** n / math.factorial(n) for n in range(m))
    )


def h_literal(x, beta, K, m):
    total = 0.0
    for n in range(m):
        for j in range(m - n):
            total += (
                m ** (m - n - 1)
                * K ** (n + j)
                / (m + K) ** (m - 1 + j)
                * beta**j
                * special.poch(m - n - j, n + j)
                / (math.factorial(n + j) * math.factorial(j))
                * x**j
            )
    return total * math.exp(-beta * m / (m + K) * x)


# -- parameters ---------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(K=-1, Delta=0, m=1),
        dict(K=1, Delta=1.2, m=1),
        dict(K=1, Delta=0.5, m=0),
        dict(K=1, Delta=0.5, m=1, gamma_bar=0),
        dict(K=0, Delta=0.5, m=1),
        dict(K=float("nan"), Delta=0, m=1),
        dict(K=1, Delta=0, m=float("nan")),
    ],
)
def test_params_reject_invalid(kwargs):
    with pytest.raises(DomainError):
        FtrParams(**kwargs)


def test_params_helpers():
    p = FtrParams.from_db(10.0, 0.5, 2, 20.0)
    assert p.K == pytest.approx(10.0) and p.gamma_bar == pytest.approx(100.0)
    assert p.with_gamma_bar(3.0).gamma_bar == 3.0
    assert FtrParams(1, 0, math.inf).integer_m is False
    with pytest.raises(DomainError):
        FtrParams(1, 0, 2.5).require_integer_m()


def test_geometry_examples():
    g = params_to_geometry(FtrParams(0, 0, 1), 1.0)
    assert (g.V1, g.V2) == (0.0, 0.0)
    g = params_to_geometry(FtrParams(7.0, 1.0, 1), 1.3)
    assert g.V1 == pytest.approx(1.3 * math.sqrt(7.0), rel=1e-14)
    assert g.V2 == pytest.approx(g.V1, rel=1e-14)


def test_geometry_round_trip_reference():
    sigma = 1 / math.sqrt(2)
    g = params_to_geometry(REF, sigma)
    assert g.V1 >= g.V2 >= 0
    K = (g.V1**2 + g.V2**2) / (2 * sigma**2)
    D = 2 * g.V1 * g.V2 / (g.V1**2 + g.V2**2)
    assert K == pytest.approx(15, rel=1e-12)
    assert D == pytest.approx(0.9, rel=1e-12)
    back = geometry_to_params(g, 5, 1.0)
    assert back.K == pytest.approx(15, rel=1e-12) and back.Delta == pytest.approx(0.9, rel=1e-12)


@given(
    st.floats(0.01, 1e4),
    st.floats(0.0, 1.0),
    st.floats(0.05, 10.0),
)
def test_geometry_round_trip_property(K, D, sigma):
    g = params_to_geometry(FtrParams(K, D, 2), sigma)
    back = geometry_to_params(g, 2, 1.0)
    assert back.K == pytest.approx(K, rel=1e-12)
    assert back.Delta == pytest.approx(D, rel=1e-12, abs=1e-12)


def test_geometry_validation():
    with pytest.raises(DomainError):
        SpecularGeometry(1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        SpecularGeometry(1.0, 0.5, 0.0)


# -- MGF ----------------------------------------------------------------------


def test_mgf_normalisation_and_rayleigh():
    assert mgf(REF, 0.0) == 1.0
    assert mgf(FtrParams(0, 0, 3, 2.0), -1.0) == pytest.approx(1 / 3, rel=1e-14)


@given(
    st.floats(0.0, 100.0),
    st.floats(0.0, 1.0),
    st.one_of(st.integers(1, 30), st.floats(0.2, 30.0)),
    st.floats(0.1, 100.0),
)
@settings(max_examples=60, deadline=None)
def test_mgf_is_a_decreasing_probability_transform(K, D, m, g):
    p = FtrParams(K, D if K > 0 else 0.0, m, g)
    s = -np.array([0.0, 0.01, 0.3, 2.0, 40.0]) / g
    v = mgf(p, s)
    assert v[0] == 1.0
    assert np.all(np.diff(v) <= 1e-15)
    assert np.all(v > 0)


@pytest.mark.parametrize(
    "p",
    [REF, FtrParams(4, 0.5, 3, 2.0), FtrParams(80, 0.99, 2.5, 1.0), FtrParams(10, 0.3, 0.4, 3.0), FtrParams(32.7, 0.8331, 10, 2.0)],
)
def test_mgf_matches_gamma_average(p):
    for s in (-0.1, -0.5, -2.0, -10.0):
        assert mgf(p, s) == pytest.approx(gamma_averaged_mgf(p, s), rel=1e-9)


@pytest.mark.parametrize("p", [REF, FtrParams(4, 0.5, 3, 2.0), FtrParams(80, 0.9, 10, 1.0)])
def test_mgf_matches_factorised_sum(p):
    for s in (-0.05, -0.5, -3.0, -20.0):
        assert mgf(p, s) == pytest.approx(mgf_literal_factorized(p, s), rel=1e-11)


def test_mgf_against_monte_carlo(batch_of):
    b = batch_of(15, 0.9, 5, 1.0, 10**6, 101)
    est, se = empirical_mgf(b, -0.5)
    assert abs(est - mgf(REF, -0.5)) <= 3 * se


def test_mgf_rejects_positive_s():
    with pytest.raises(DomainError):
        mgf(REF, 0.1)


@pytest.mark.parametrize(
    "p,expected",
    [(FtrParams(0, 0, 1, 3.7), 3.7), (REF, 1.0), (FtrParams(32.7, 0.8331, 10, 2.0), 2.0), (FtrParams(5, 0.4, 1.7, 0.3), 0.3)],
)
def test_mean_from_mgf(p, expected):
    assert mgf_derivative_mean(p) == pytest.approx(expected, rel=1e-6)


# -- factorisation constants --------------------------------------------------


def test_poly_coeffs_degenerate_cases():
    c = poly_coeffs(FtrParams(0, 0, 4, 2.0))
    assert c.a1 == c.a2 == c.a3 == pytest.approx(0.5) and c.a4 == pytest.approx(0.5)
    c = poly_coeffs(FtrParams(6, 0, 3, 1.0))
    assert c.a1 == pytest.approx(c.a2) and c.a2 == pytest.approx(c.a3)
    assert c.a1 == pytest.approx(3 * 7 / 9)


@pytest.mark.parametrize("p", [REF, FtrParams(80, 0.5873, 2, 1.0), FtrParams(3, 1.0, 7, 0.2)])
def test_factorisation_identity(p):
    c = poly_coeffs(p)
    assert 0 < c.a2 <= c.a1 <= c.a3
    s = np.random.default_rng(0).uniform(-10, 0, 100)
    np.testing.assert_allclose(r_factorized(p, s), r_poly(p, s), rtol=1e-10)


def test_poly_coeffs_need_integer_m():
    with pytest.raises(DomainError):
        poly_coeffs(FtrParams(1, 0.5, 1.5))


# -- exact PDF / CDF ----------------------------------------------------------


def test_pdf_exact_exponential():
    assert pdf_exact(FtrParams(0, 0, 1, 1.0), 1.0) == pytest.approx(math.exp(-1), rel=1e-9)


@pytest.mark.parametrize("p", [REF, FtrParams(4, 0.5, 3, 1.0), FtrParams(8, 0.9, 2, 10.0), FtrParams(80, 0.5873, 2, 1.0)])
def test_pdf_exact_normalised_and_nonnegative(p):
    val = integrate.quad(lambda x: pdf_exact(p, x), 0, np.inf, limit=200, epsabs=1e-10)[0]
    assert val == pytest.approx(1.0, abs=1e-6)
    x = np.linspace(0, 8 * p.gamma_bar, 400)
    assert np.all(pdf_exact(p, x) >= 0)


def test_pdf_exact_at_zero_is_the_limit():
    for p in (REF, FtrParams(8, 0.9, 2, 1.0)):
        assert pdf_exact(p, 1e-7) == pytest.approx(pdf_at_zero(p), rel=1e-5)


def test_pdf_exact_histogram_oracle(batch_of):
    p = FtrParams(4, 0.5, 3, 1.0)
    b = batch_of(4, 0.5, 3, 1.0, 10**7, 202)
    lo, hi = 0.795, 0.805
    frac = np.count_nonzero((b.snr >= lo) & (b.snr < hi)) / b.snr.size
    se = math.sqrt(frac * (1 - frac) / b.snr.size)
    width_mass = cdf_exact(p, hi) - cdf_exact(p, lo)
    assert abs(frac - width_mass) <= 3 * se
    assert width_mass / (hi - lo) == pytest.approx(pdf_exact(p, 0.8), rel=1e-4)


@pytest.mark.parametrize("s", [-0.25, -1.0, -4.0])
def test_pdf_mgf_duality(s):
    val = integrate.quad(lambda x: math.exp(s * x) * pdf_exact(REF, x), 0, np.inf, limit=200)[0]
    assert val == pytest.approx(mgf(REF, s), abs=1e-5)


def test_cdf_pdf_duality():
    x = np.linspace(0.1, 10, 60)
    h = 1e-4
    deriv = (cdf_exact(REF, x + h) - cdf_exact(REF, x - h)) / (2 * h)
    np.testing.assert_allclose(deriv, pdf_exact(REF, x), atol=1e-5)


def test_cdf_exact_examples():
    assert cdf_exact(REF, 0.0) == 0.0
    assert cdf_exact(FtrParams(0, 0, 2, 1.0), math.log(2)) == pytest.approx(0.5, rel=1e-9)
    x = np.linspace(0, 30, 300)
    F = cdf_exact(REF, x)
    assert np.all(np.diff(F) >= -1e-12)
    assert F[-1] == pytest.approx(1.0, abs=1e-9)


def test_cdf_exact_against_ecdf(batch_of):
    b = batch_of(15, 0.9, 5, 1.0, 10**6, 303)
    assert ks_upper_bound(b.snr, exact_cdf_fn(REF), 5000) <= dkw_epsilon(b.snr.size)


def test_exact_paths_need_integer_m():
    with pytest.raises(DomainError):
        pdf_exact(FtrParams(3, 0.5, 2.5), 1.0)
    with pytest.raises(ValueError):
        pdf_exact(REF, -1.0)


def test_rician_and_twdp_limits():
    rice = FtrParams(4, 0.0, math.inf, 2.0)
    x = np.linspace(0.01, 10, 50)
    np.testing.assert_allclose(pdf_exact(rice, x), pdf_exact(FtrParams(4, 0.0, 10**6, 2.0), x), rtol=1e-4)
    twdp = FtrParams(6, 0.7, math.inf, 1.0)
    val = integrate.quad(lambda v: pdf_exact(twdp, v), 0, np.inf, limit=200)[0]
    assert val == pytest.approx(1.0, abs=1e-7)
    assert cdf_exact(twdp, 0.7) == pytest.approx(
        integrate.quad(lambda v: pdf_exact(twdp, v), 0, 0.7)[0], abs=1e-8
    )


@pytest.mark.parametrize("method", ["euler-summation", "fixed-talbot"])
def test_inversion_methods_agree(method):
    x = np.linspace(0.05, 10, 100)
    ref = pdf_exact(REF, x, LaplaceInversion("euler-summation"))
    np.testing.assert_allclose(pdf_exact(REF, x, LaplaceInversion(method)), ref, rtol=1e-6)


# -- mixture ------------------------------------------------------------------


def test_mixture_order_one():
    c = mixture_coeffs(FtrParams(0.5, 0.0, 2), 1)
    assert c.alpha == (1.0,) and c.delta == (0.0,)


def test_mixture_weights_exact_for_order_three():
    w = exact_weights(3)
    assert sum(w) == 1
    assert all(isinstance(v, Fraction) for v in w)


@pytest.mark.parametrize("M", range(1, 21))
def test_mixture_weights_normalised(M):
    assert math.fsum(float(a) for a in exact_weights(M)) == pytest.approx(1.0, abs=1e-10)


def test_mixture_delta_zero_collapses():
    c = mixture_coeffs(FtrParams(5, 0.0, 2), 4)
    assert all(d == 0.0 for d in c.delta)
    p = FtrParams(5, 0.0, 2, 1.0)
    x = np.linspace(0, 5, 20)
    np.testing.assert_allclose(pdf_approx(p, x, c), rician_shadowed_pdf(x, 6.0, 5.0, 2), rtol=1e-13)


def test_mixture_offsets_and_validation():
    p = FtrParams(15, 0.9, 5)
    c = mixture_coeffs(p)
    assert c.M == default_order(p) == 15
    assert all(-0.9 <= d <= 0.9 for d in c.delta)
    with pytest.raises(DomainError):
        mixture_coeffs(p, 14)
    with pytest.raises(DomainError):
        MixtureCoeffs(2, (0.5, 0.6), (0.1, 0.0))
    with pytest.warns(PrecisionWarning):
        mixture_coeffs(FtrParams(30, 0.9, 2), 28)


@pytest.mark.parametrize("beta,K,m", [(1.0, 0.0, 1), (2.5, 3.0, 4), (16.0, 28.5, 5), (0.3, 100.0, 10)])
def test_kernels_against_literal_sums(beta, K, m):
    for x in (0.0, 0.01, 0.5, 2.0, 7.0):
        assert rician_shadowed_pdf(x, beta, K, m) == pytest.approx(g_literal(x, beta, K, m), rel=1e-12, abs=1e-300)
        assert rician_shadowed_sf(x, beta, K, m) == pytest.approx(h_literal(x, beta, K, m), rel=1e-11, abs=1e-300)


@pytest.mark.parametrize("beta,K,m", [(1.0, 0.0, 1), (2.5, 3.0, 4), (16.0, 28.5, 5)])
def test_kernel_normalised(beta, K, m):
    val = integrate.quad(lambda x: rician_shadowed_pdf(x, beta, K, m), 0, np.inf)[0]
    assert val == pytest.approx(1.0, abs=1e-10)


def test_approx_exponential_case():
    p = FtrParams(0, 0, 1, 2.0)
    x = np.linspace(0, 10, 30)
    np.testing.assert_allclose(pdf_approx(p, x), 0.5 * np.exp(-0.5 * x), rtol=1e-14)
    np.testing.assert_allclose(cdf_approx(p, x), -np.expm1(-0.5 * x), rtol=1e-12, atol=1e-15)


def test_approx_hoyt_case_matches_mgf():
    p = FtrParams(5, 0.6, 1, 1.0)
    q = hoyt_q(p)
    for s in (-0.5, -2.0):
        val = integrate.quad(lambda x: math.exp(s * x) * pdf_approx(p, x), 0, np.inf)[0]
        assert val == pytest.approx(hoyt_mgf(q, 1.0, s), abs=1e-3)


def test_approx_cdf_properties():
    p = REF
    x = np.linspace(0, 10, 500)
    F = cdf_approx(p, x)
    assert np.all(np.diff(F) >= 0)
    assert cdf_approx(p, 50.0) == pytest.approx(1.0, abs=1e-8)
    h = 1e-5
    xi = np.linspace(0.05, 8, 40)
    np.testing.assert_allclose((cdf_approx(p, xi + h) - cdf_approx(p, xi - h)) / (2 * h), pdf_approx(p, xi), atol=1e-6)
    assert np.max(np.abs(F - cdf_exact(p, x))) <= 5e-3


def test_approx_vs_exact_reference():
    x = np.linspace(0, 5, 501)
    exact = pdf_exact(REF, x)
    assert np.max(np.abs(pdf_approx(REF, x) - exact)) <= 5e-3 * exact.max()


# -- dispatch and envelope ----------------------------------------------------


def test_dispatch():
    x = np.linspace(0.1, 3, 5)
    assert resolve_method(REF, "auto") == "approx"
    np.testing.assert_allclose(pdf(REF, x, "exact"), pdf_exact(REF, x))
    np.testing.assert_allclose(cdf(REF, x, "approx", M=16), cdf_approx(REF, x, mixture_coeffs(REF, 16)))
    assert resolve_method(FtrParams(2, 0.0, math.inf), "auto") == "exact"
    with pytest.raises(DomainError):
        pdf(REF, x, "series")


def test_envelope_rayleigh():
    r = np.linspace(0, 3, 30)
    np.testing.assert_allclose(envelope_pdf(FtrParams(0, 0, 1), r, 1.0, "exact"), 2 * r * np.exp(-r * r), rtol=1e-8, atol=1e-15)
    np.testing.assert_allclose(envelope_cdf(FtrParams(0, 0, 1), r, 1.0, "exact"), -np.expm1(-r * r), atol=1e-9)


def test_envelope_normalised():
    val = integrate.quad(lambda r: envelope_pdf(REF, r, 1.0, "exact"), 0, np.inf, limit=200)[0]
    assert val == pytest.approx(1.0, abs=1e-7)


def local_maxima(y):
    return int(np.sum((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:])))


# Mode counts at K=15, Delta=0.9: the deep-fade shoulder only separates into
# a second maximum once the specular fluctuation is weak (m of about 30 and up).
# The single mode at m=5 was also confirmed on a 2e7-sample histogram.
@pytest.mark.parametrize(
    "m,expected", [(5, 1), (10, 1), (20, 1), (30, 2), (50, 2), (100, 2), (math.inf, 2)]
)
def test_envelope_mode_count(m, expected):
    r = np.arange(1e-3, 2, 1e-3)
    assert local_maxima(envelope_pdf(FtrParams(15, 0.9, m), r, 1.0, "exact")) == expected


def test_envelope_low_m_at_most_two_modes():
    r = np.arange(1e-3, 2, 1e-3)
    assert local_maxima(envelope_pdf(FtrParams(15, 0.9, 2), r, 1.0, "exact")) <= 2


def test_envelope_histogram(batch_of):
    b = batch_of(15, 0.9, 5, 1.0, 10**6, 404)
    r = b.envelope / math.sqrt(np.mean(b.envelope**2) * 0 + 16.0)  # E|V|^2 = 2 sigma^2 (1 + K) = 16
    lo, hi = 0.99, 1.01
    frac = np.count_nonzero((r >= lo) & (r < hi)) / r.size
    se = math.sqrt(frac * (1 - frac) / r.size)
    mass = envelope_cdf(REF, hi, 1.0, "exact") - envelope_cdf(REF, lo, 1.0, "exact")
    assert abs(frac - mass) <= 3 * se


# -- Hoyt, reductions, independent variant ------------------------------------


def test_hoyt_q_examples():
    assert hoyt_q(FtrParams(3.0, 0.0, 1)) == 1.0
    assert hoyt_q(FtrParams(1e6, 0.5, 1)) == pytest.approx(math.sqrt(0.5 / 1.5), abs=1e-3)
    with pytest.raises(DomainError):
        hoyt_q(FtrParams(3.0, 0.5, 2))


def test_hoyt_identity_k5():
    p = FtrParams(5, 0.6, 1, 1.0)
    q = hoyt_q(p)
    for s in np.linspace(-20, 0, 41):
        assert mgf(p, s) == pytest.approx(hoyt_mgf(q, 1.0, s), rel=1e-10)


@pytest.mark.parametrize("case", SPECIAL_CASES, ids=lambda c: f"{c.target}-{c.label[:1]}")
def test_special_cases(case):
    assert check_reduction(case) <= case.tol


def test_reduce_examples():
    ref = reduce(FtrParams(0, 0, 7, 1.0), "rayleigh")
    for s in (-3.0, -0.2):
        assert mgf(FtrParams(0, 0, 7, 1.0), s) == pytest.approx(ref(s), abs=1e-10)
    with pytest.raises(DomainError):
        reduce(FtrParams(4, 0.3, 3), "rician_shadowed")
    with pytest.raises(DomainError):
        reduce(FtrParams(4, 0.0, 3), "kappa_mu")


def test_independent_variant():
    p = FtrParams(8, 0.9, 2, 1.0)
    assert mgf_independent(p, 0.0) == 1.0
    q = FtrParams(4, 0.0, 3, 1.0)
    assert mgf_independent(q, -1.0) == pytest.approx(rician_shadowed_mgf(4, 3, 1.0, -1.0), rel=1e-14)
    for s in (-0.1, -1.0, -7.0):
        assert mgf_independent(q, s) == pytest.approx(mgf(q, s), abs=1e-9)
    with pytest.raises(DomainError):
        mgf_independent(p, 0.5)


def test_independent_against_double_gamma_average():
    # Independent fluctuations: average the conditional MGF over both Gamma
    # powers and the relative phase.
    p = FtrParams(8, 0.9, 2, 1.0)
    s = -0.7
    g = params_to_geometry(p, 1 / math.sqrt(2))
    scale = p.gamma_bar / (1 + p.K)
    nodes, weights = special.roots_genlaguerre(40, p.m - 1)
    z = nodes / p.m
    w = weights / math.gamma(p.m)
    th, tw = np.polynomial.legendre.leggauss(60)
    th = (th + 1) * math.pi / 2
    tw = tw * math.pi / 2 / math.pi
    total = 0.0
    for z1, w1 in zip(z, w):
        for z2, w2 in zip(z, w):
            power = z1 * g.V1**2 + z2 * g.V2**2 + 2 * math.sqrt(z1 * z2) * g.V1 * g.V2 * np.cos(th)
            cond = np.exp(s * scale * power / (1 - s * scale)) / (1 - s * scale)
            total += w1 * w2 * np.sum(tw * cond)
    assert mgf_independent(p, s) == pytest.approx(total, rel=1e-8)
