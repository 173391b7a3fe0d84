"""Mellin-Barnes contour engine: identity corpus, cross-routes, diagnostics.

High-precision reference values were frozen from a 30-digit independent
evaluation before the engine was built.
"""

import math

import numpy as np
import pytest

from fmac import fading
from fmac.meijer import (
    BivariateGSpec,
    ContourError,
    GBlock,
    MeijerGSpec,
    bivariate_meijer_g,
    bivariate_meijer_g_with_error,
    meijer_g,
    meijer_g_cdf_fisher,
    meijer_g_with_error,
)
from fmac.quad import integrate_semi_infinite
from fmac.specfun import log_gamma


def _log_spec(z: float) -> MeijerGSpec:
    # the classic representation whose value is ln(1 + z)
    return MeijerGSpec(m=1, n=2, p=2, q=2, a=(1.0, 1.0), b=(1.0, 0.0), z=z)


# ---------------------------------------------------------------------------
# identity corpus
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
def test_log_identity(z):
    val = meijer_g(_log_spec(z))
    assert abs(val.imag) < 1e-10
    assert val.real == pytest.approx(math.log1p(z), abs=1e-9)


def test_log_identity_frozen_reference():
    # 30-digit reference for the z=10 case
    val = meijer_g(_log_spec(10.0))
    assert val.real == pytest.approx(2.39789527279837054406194357797, abs=1e-9)


@pytest.mark.parametrize("z", [0.5, 2.0, 7.3])
def test_exp_identity(z):
    spec = MeijerGSpec(m=1, n=0, p=0, q=1, a=(), b=(0.0,), z=z)
    val = meijer_g(spec)
    assert val.real == pytest.approx(math.exp(-z), rel=1e-9)
    assert abs(val.imag) < 1e-12


def test_power_law_identity_simple():
    # one gamma factor up, one down: value (1+z)^(a-b-1) * Gamma(1-a+b) * z^b
    spec = MeijerGSpec(m=1, n=1, p=1, q=1, a=(0.0,), b=(0.0,), z=1.0)
    assert meijer_g(spec).real == pytest.approx(0.5, abs=1e-10)


def test_power_law_identity_frozen_reference():
    spec = MeijerGSpec(m=1, n=1, p=1, q=1, a=(0.3,), b=(1.2,), z=0.7)
    ref = 0.22873574683914800348393635437  # 30-digit oracle
    assert meijer_g(spec).real == pytest.approx(ref, rel=1e-9)


def test_power_law_identity_closed_form_sweep():
    for a, b, z in [(0.2, 0.9, 0.4), (-0.5, 0.0, 2.0), (0.1, 2.3, 0.05)]:
        spec = MeijerGSpec(m=1, n=1, p=1, q=1, a=(a,), b=(b,), z=z)
        exact = (
            math.gamma(1.0 - a + b) * z**b * (1.0 + z) ** (a - b - 1.0)
        )
        assert meijer_g(spec).real == pytest.approx(exact, rel=1e-9)


# ---------------------------------------------------------------------------
# error reporting and contour diagnostics
# ---------------------------------------------------------------------------


def test_reported_error_bounds_actual_error():
    for z in (0.1, 1.0, 10.0):
        val, err, evals = meijer_g_with_error(_log_spec(z))
        assert abs(val.real - math.log1p(z)) <= max(err, 1e-10)
        assert evals > 0


def test_tightening_tolerance_does_not_move_value():
    loose, _, _ = meijer_g_with_error(_log_spec(1.0), tol=1e-6)
    tight, _, _ = meijer_g_with_error(_log_spec(1.0), tol=1e-12)
    assert abs(loose - tight) < 1e-7


def test_empty_strip_raises_contour_error():
    # b-pole at -2 and a-pole at 1-3.5=-2.5 leave no separating line
    spec = MeijerGSpec(m=1, n=1, p=1, q=1, a=(3.5,), b=(2.0,), z=1.0)
    with pytest.raises(ContourError):
        meijer_g(spec)


def test_requested_contour_outside_strip_raises():
    with pytest.raises(ContourError):
        meijer_g(_log_spec(1.0), contour=25.0)


def test_zero_argument_rejected():
    with pytest.raises(ValueError):
        MeijerGSpec(m=1, n=0, p=0, q=1, a=(), b=(0.0,), z=0.0)


def test_block_order_validation():
    with pytest.raises(ValueError):
        GBlock(m=2, n=0, a=(), b=(0.0,))  # m exceeds len(b)


# ---------------------------------------------------------------------------
# negative real argument (principal branch)
# ---------------------------------------------------------------------------


def test_negative_argument_principal_branch_frozen_reference():
    # kernel used by the capacity series cross-check at argument -1; the
    # 30-digit oracle value is essentially pure imaginary
    spec = MeijerGSpec(
        m=2, n=3, p=3, q=3, a=(0.0, -3.0, -1.0), b=(1.0, 3.0, 0.0), z=-1.0
    )
    ref = complex(0.0, -35.3429173528851739327047380619)
    val = meijer_g(spec)
    assert abs(val - ref) <= 1e-8 * abs(ref)


# ---------------------------------------------------------------------------
# SNR-distribution route and Mellin identity
# ---------------------------------------------------------------------------


def test_cdf_form_frozen_reference():
    # G^{1,2}_{2,2}(0.8 | (-2, 1); (2, 0)) from the 30-digit oracle
    spec = MeijerGSpec(m=1, n=2, p=2, q=2, a=(-2.0, 1.0), b=(2.0, 0.0), z=0.8)
    assert meijer_g(spec).real == pytest.approx(
        1.19981710105166895290352080476, rel=1e-9
    )


def test_cdf_contour_route_matches_beta_route():
    # the two independent CDF routes must agree across a parameter grid
    for m, m_s in [(1.0, 2.0), (2.0, 3.0), (3.5, 5.0), (5.0, 1.5)]:
        for mean in (1.0, 10.0):
            link = fading.FadingParams(m=m, m_s=m_s, mean_snr=mean)
            for g in (0.05, 0.8, 3.0, 25.0):
                via_contour = meijer_g_cdf_fisher(link, g)
                via_beta = fading.cdf(link, g)
                assert via_contour == pytest.approx(via_beta, abs=1e-7), (m, m_s, g)


def test_cdf_form_boundary_values():
    link = fading.FadingParams(m=2.0, m_s=3.0, mean_snr=1.0)
    assert meijer_g_cdf_fisher(link, 0.0) == 0.0
    assert meijer_g_cdf_fisher(link, 1e9) == pytest.approx(1.0, abs=1e-6)


def test_mellin_transform_of_snr_density_matches_gamma_product():
    # integral of g^(s-1) pdf(g) against the gamma-ratio formula, and both
    # against a 30-digit frozen value at s=1.3
    link = fading.FadingParams(m=2.0, m_s=3.0, mean_snr=10.0)
    lam = link.lam
    s = 1.3
    log_a = float(
        (log_gamma(link.m + link.m_s) - log_gamma(link.m) - log_gamma(link.m_s)).real
    )
    formula = math.exp(
        log_a
        + float((log_gamma(link.m - 1.0 + s) + log_gamma(1.0 + link.m_s - s)).real)
        - float(log_gamma(link.m + link.m_s).real)
        - s * math.log(lam)
        + math.log(lam)
    )
    quad_val = integrate_semi_infinite(
        lambda g: g ** (s - 1.0) * fading.pdf(link, g), 0.0
    ).value
    frozen = 2.03049151301756931161910806722
    assert formula == pytest.approx(frozen, rel=1e-10)
    assert quad_val == pytest.approx(formula, rel=1e-6)


def test_single_capacity_term_matches_frozen_reference():
    # G^{2,3}_{3,3}(15 | (1,1,-1); (1,3,0)) appearing in the capacity closed
    # form for the workhorse link
    spec = MeijerGSpec(
        m=2, n=3, p=3, q=3, a=(1.0, 1.0, -1.0), b=(1.0, 3.0, 0.0), z=15.0
    )
    assert meijer_g(spec).real == pytest.approx(
        4.7311726216118049094180377794, rel=1e-9
    )


# ---------------------------------------------------------------------------
# bivariate evaluation
# ---------------------------------------------------------------------------


def test_bivariate_empty_second_block_reduces_to_univariate():
    uni = _log_spec(1.0)
    bi = BivariateGSpec(
        joint=GBlock(m=0, n=0),
        block1=GBlock(m=1, n=2, a=uni.a, b=uni.b),
        block2=GBlock(m=0, n=0),
        z1=1.0,
        z2=1.0,
    )
    val = bivariate_meijer_g(bi)
    assert val.real == pytest.approx(math.log(2.0), abs=1e-9)


def test_bivariate_empty_first_block_reduces_to_univariate():
    uni = _log_spec(0.5)
    bi = BivariateGSpec(
        joint=GBlock(m=0, n=0),
        block1=GBlock(m=0, n=0),
        block2=GBlock(m=1, n=2, a=uni.a, b=uni.b),
        z1=1.0,
        z2=0.5,
    )
    val = bivariate_meijer_g(bi)
    assert val.real == pytest.approx(math.log(1.5), abs=1e-9)


def test_bivariate_product_factorization():
    # with an empty joint block the double integral factorizes into the
    # product of the two univariate values
    b1 = GBlock(m=1, n=0, a=(), b=(0.0,))
    b2 = GBlock(m=1, n=0, a=(), b=(0.0,))
    bi = BivariateGSpec(joint=GBlock(m=0, n=0), block1=b1, block2=b2, z1=1.5, z2=0.5)
    val, err, _ = bivariate_meijer_g_with_error(bi)
    assert val.real == pytest.approx(math.exp(-1.5) * math.exp(-0.5), rel=1e-7)
    assert abs(val.imag) <= 1e-9


def test_bivariate_no_kernel_raises():
    empty = GBlock(m=0, n=0)
    with pytest.raises(ContourError):
        bivariate_meijer_g(
            BivariateGSpec(joint=empty, block1=empty, block2=empty, z1=1.0, z2=1.0)
        )


def test_bivariate_contour_override_validation():
    b1 = GBlock(m=1, n=0, a=(), b=(0.0,))
    b2 = GBlock(m=1, n=0, a=(), b=(0.0,))
    bi = BivariateGSpec(joint=GBlock(m=0, n=0), block1=b1, block2=b2, z1=1.0, z2=1.0)
    with pytest.raises(ContourError):
        bivariate_meijer_g(bi, contours=(-5.0, 1.0))  # c1 left of the b-pole


def test_bivariate_error_estimate_honest_on_factorizable_case():
    b1 = GBlock(m=1, n=0, a=(), b=(0.0,))
    b2 = GBlock(m=1, n=0, a=(), b=(0.0,))
    bi = BivariateGSpec(joint=GBlock(m=0, n=0), block1=b1, block2=b2, z1=2.0, z2=3.0)
    val, err, evals = bivariate_meijer_g_with_error(bi)
    exact = math.exp(-5.0)
    assert abs(val.real - exact) <= max(err, 1e-9)
    assert evals > 0


def test_bivariate_outage_kernel_matches_frozen_reference():
    # the bounded-kernel bivariate assembly behind the clean-channel outage
    # closed form, evaluated at the workhorse point; the frozen value is the
    # 30-digit direct integral of the outage probability itself
    from fmac.metrics import (
        MacScenario,
        Method,
        Scenario,
        op_clean_independent,
    )
    from fmac.copula import DependenceModel

    s = MacScenario(
        scenario=Scenario.CLEAN,
        link1=fading.FadingParams(2.0, 3.0, 10.0),
        link2=fading.FadingParams(2.0, 3.0, 10.0),
        dependence=DependenceModel.independent(),
        rate_threshold=2.5,
    )
    est = op_clean_independent(s, method=Method.CLOSED_FORM)
    assert est.value == pytest.approx(0.672571049505295580, abs=1e-9)
