"""Outage probability and average capacity: closed forms, quadrature, series,
Monte Carlo, and the invariants that tie the routes together."""

import math

import pytest

from fmac import (
    DependenceModel,
    Estimate,
    FadingParams,
    MacScenario,
    McConfig,
    Method,
    Scenario,
    SeriesDivergenceError,
    ac_clean_correlated,
    ac_clean_independent,
    ac_dirty_correlated,
    ac_dirty_independent,
    awgn_reference_capacity,
    correlation_coefficient,
    op_clean_correlated,
    op_clean_independent,
    op_dirty_correlated,
    op_dirty_independent,
)
from fmac.fading import cdf

_SEED = 907

# rate chosen so the SNR threshold is exactly 2: 2**(2 * rate) - 1 == 2
_ELEM_RATE = math.log2(3.0) / 2.0
_ELEM = FadingParams(m=1.0, m_s=2.0, mean_snr=1.0)  # F(2) = 0.75 exactly
_ELEM_WEAK = FadingParams(m=1.0, m_s=2.0, mean_snr=4.0)  # F(2) = 0.36 exactly


def _scenario(
    scenario=Scenario.CLEAN,
    link1=None,
    link2=None,
    dependence=None,
    rate=2.5,
):
    link1 = link1 if link1 is not None else FadingParams(2.0, 3.0, 10.0)
    link2 = link2 if link2 is not None else link1
    dependence = dependence if dependence is not None else DependenceModel.independent()
    return MacScenario(scenario, link1, link2, dependence, rate_threshold=rate)


# ---------------------------------------------------------------------------
# record validation
# ---------------------------------------------------------------------------


def test_estimate_rejects_negative_err():
    with pytest.raises(ValueError, match="err must be non-negative"):
        Estimate(value=0.5, err=-1e-3, method=Method.CLOSED_FORM)


def test_estimate_rejects_non_finite_value():
    with pytest.raises(ValueError, match="value must be finite"):
        Estimate(value=math.nan, err=0.0, method=Method.CLOSED_FORM)


def test_scenario_rejects_nonpositive_rate():
    with pytest.raises(ValueError, match="rate_threshold"):
        _scenario(rate=0.0)


def test_snr_threshold_requires_rate():
    sc = _scenario(rate=None)
    with pytest.raises(ValueError, match="no rate_threshold"):
        sc.snr_threshold


def test_snr_threshold_value():
    # 2**(2 * 2.5) - 1
    assert _scenario(rate=2.5).snr_threshold == pytest.approx(31.0, abs=1e-12)


def test_correlated_metrics_reject_independent_model():
    sc = _scenario()
    with pytest.raises(ValueError, match="requires a 'clayton'"):
        op_clean_correlated(sc)


def test_independent_metrics_reject_clayton_model():
    sc = _scenario(dependence=DependenceModel.clayton(10.0))
    with pytest.raises(ValueError, match="requires a 'independent'"):
        op_clean_independent(sc)


def test_awgn_reference_capacity():
    sc = _scenario(link1=FadingParams(2.0, 3.0, 10.0), link2=FadingParams(2.0, 3.0, 6.0))
    assert awgn_reference_capacity(sc) == pytest.approx(0.5 * math.log2(17.0), rel=1e-14)


# ---------------------------------------------------------------------------
# elementary closed-form arithmetic (m = 1 links, threshold 2)
# ---------------------------------------------------------------------------


def test_op_dirty_independent_elementary():
    sc = _scenario(Scenario.DOUBLY_DIRTY, _ELEM, _ELEM, rate=_ELEM_RATE)
    # P(min <= 2) = 1 - (1 - 0.75)**2
    assert op_dirty_independent(sc).value == pytest.approx(0.9375, abs=1e-12)


def test_op_dirty_correlated_elementary():
    sc = _scenario(
        Scenario.DOUBLY_DIRTY, _ELEM, _ELEM,
        dependence=DependenceModel.clayton(1.0), rate=_ELEM_RATE,
    )
    # F1 + F2 - C(F1, F2) with C(0.75, 0.75) = (4/3 + 4/3 - 1)**-1 = 0.6
    assert op_dirty_correlated(sc).value == pytest.approx(0.9, abs=1e-12)


def test_op_dirty_correlated_comonotone_limit():
    # as theta grows the copula approaches min(u1, u2), so the outage of the
    # minimum approaches the larger marginal CDF
    sc = _scenario(
        Scenario.DOUBLY_DIRTY, _ELEM, _ELEM_WEAK,
        dependence=DependenceModel.clayton(1e4), rate=_ELEM_RATE,
    )
    assert op_dirty_correlated(sc).value == pytest.approx(0.75, abs=1e-3)


# ---------------------------------------------------------------------------
# frozen reference values (independent 1e-40-precision oracles)
# ---------------------------------------------------------------------------


def test_op_clean_independent_closed_reference(clean_indep_2_3_10):
    est = op_clean_independent(clean_indep_2_3_10, method=Method.CLOSED_FORM)
    assert est.value == pytest.approx(0.672571049505295579707115762279, abs=1e-9)


def test_op_clean_independent_quadrature_reference(clean_indep_2_3_10):
    est = op_clean_independent(clean_indep_2_3_10, method=Method.QUADRATURE)
    assert est.value == pytest.approx(0.672571049505295579707115762279, abs=1e-7)
    assert abs(est.value - 0.672571049505295579707115762279) <= max(est.err, 1e-10)


def test_op_clean_independent_low_snr_reference():
    sc = _scenario(rate=0.5, link1=FadingParams(2.0, 3.0, 1.0))
    est = op_clean_independent(sc, method=Method.CLOSED_FORM)
    assert est.value == pytest.approx(0.131311543233328573652965030487, abs=1e-9)


def test_ac_dirty_independent_closed_reference(dirty_indep_2_3_10):
    est = ac_dirty_independent(dirty_indep_2_3_10, method=Method.CLOSED_FORM)
    assert est.value == pytest.approx(1.3520410542739838518540775374, abs=1e-9)


def test_ac_dirty_independent_quadrature_reference(dirty_indep_2_3_10):
    est = ac_dirty_independent(dirty_indep_2_3_10, method=Method.QUADRATURE)
    assert est.value == pytest.approx(1.3520410542739838518540775374, abs=1e-8)


def test_ac_clean_independent_quadrature_reference(clean_indep_2_3_10):
    est = ac_clean_independent(clean_indep_2_3_10, method=Method.QUADRATURE)
    assert est.value == pytest.approx(2.28800104694736, abs=5e-8)


# ---------------------------------------------------------------------------
# cross-method agreement
# ---------------------------------------------------------------------------


def _assert_methods_agree(closed: Estimate, quadrature: Estimate) -> None:
    scale = max(1e-3, abs(quadrature.value))
    assert abs(closed.value - quadrature.value) <= 1e-3 * scale


def test_closed_and_quadrature_agree_op_clean(clean_indep_2_3_10):
    _assert_methods_agree(
        op_clean_independent(clean_indep_2_3_10, method=Method.CLOSED_FORM),
        op_clean_independent(clean_indep_2_3_10, method=Method.QUADRATURE),
    )


def test_closed_and_quadrature_agree_op_dirty(dirty_indep_2_3_10):
    _assert_methods_agree(
        op_dirty_independent(dirty_indep_2_3_10, method=Method.CLOSED_FORM),
        op_dirty_independent(dirty_indep_2_3_10, method=Method.QUADRATURE),
    )


def test_closed_and_quadrature_agree_op_dirty_correlated():
    sc = _scenario(Scenario.DOUBLY_DIRTY, dependence=DependenceModel.clayton(25.0), rate=1.5)
    _assert_methods_agree(
        op_dirty_correlated(sc, method=Method.CLOSED_FORM),
        op_dirty_correlated(sc, method=Method.QUADRATURE),
    )


def test_closed_and_quadrature_agree_ac_dirty(dirty_indep_2_3_10):
    _assert_methods_agree(
        ac_dirty_independent(dirty_indep_2_3_10, method=Method.CLOSED_FORM),
        ac_dirty_independent(dirty_indep_2_3_10, method=Method.QUADRATURE),
    )


@pytest.mark.parametrize("metric,scenario_kind,dependence", [
    (op_clean_independent, Scenario.CLEAN, None),
    (op_dirty_independent, Scenario.DOUBLY_DIRTY, None),
    (ac_clean_independent, Scenario.CLEAN, None),
    (ac_dirty_independent, Scenario.DOUBLY_DIRTY, None),
    (op_clean_correlated, Scenario.CLEAN, 10.0),
    (op_dirty_correlated, Scenario.DOUBLY_DIRTY, 10.0),
    (ac_clean_correlated, Scenario.CLEAN, 10.0),
    (ac_dirty_correlated, Scenario.DOUBLY_DIRTY, 10.0),
])
def test_monte_carlo_within_three_se_of_quadrature(metric, scenario_kind, dependence):
    dep = DependenceModel.independent() if dependence is None else DependenceModel.clayton(dependence)
    sc = _scenario(scenario_kind, dependence=dep, rate=1.5)
    ref = metric(sc, method=Method.QUADRATURE)
    mc = metric(sc, method=Method.MONTE_CARLO, mc=McConfig(n_samples=200_000, seed=_SEED))
    assert mc.err > 0.0
    assert abs(mc.value - ref.value) <= 3.0 * mc.err


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------


def test_outage_probabilities_within_unit_interval():
    for rate in (0.1, 1.0, 3.0):
        for mean in (0.2, 5.0, 200.0):
            sc = _scenario(link1=FadingParams(2.0, 3.0, mean), rate=rate)
            v = op_clean_independent(sc).value
            assert 0.0 <= v <= 1.0
            sc_d = _scenario(
                Scenario.DOUBLY_DIRTY, link1=FadingParams(2.0, 3.0, mean), rate=rate
            )
            assert 0.0 <= op_dirty_independent(sc_d).value <= 1.0


def test_op_nonincreasing_in_mean_snr():
    means = [1.0, 3.0, 10.0, 30.0, 100.0]
    clean = [
        op_clean_independent(_scenario(link1=FadingParams(2.0, 3.0, g))).value
        for g in means
    ]
    dirty = [
        op_dirty_independent(
            _scenario(Scenario.DOUBLY_DIRTY, link1=FadingParams(2.0, 3.0, g))
        ).value
        for g in means
    ]
    assert all(a > b for a, b in zip(clean, clean[1:]))
    assert all(a > b for a, b in zip(dirty, dirty[1:]))


def test_op_nondecreasing_in_rate_threshold():
    rates = [0.25, 0.5, 1.0, 2.0, 3.0]
    vals = [op_clean_independent(_scenario(rate=r)).value for r in rates]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_clean_outage_dominated_by_single_link_outages():
    sc = _scenario(link1=FadingParams(2.0, 3.0, 10.0), link2=FadingParams(3.0, 5.0, 4.0))
    t = sc.snr_threshold
    v = op_clean_independent(sc).value
    assert v <= min(cdf(sc.link1, t), cdf(sc.link2, t)) + 1e-12


def test_dirty_outage_dominates_single_link_outages():
    sc = _scenario(
        Scenario.DOUBLY_DIRTY,
        link1=FadingParams(2.0, 3.0, 10.0),
        link2=FadingParams(3.0, 5.0, 4.0),
    )
    t = sc.snr_threshold
    v = op_dirty_independent(sc).value
    assert v >= max(cdf(sc.link1, t), cdf(sc.link2, t)) - 1e-12


def test_dirty_outage_exceeds_clean_outage():
    clean = op_clean_independent(_scenario(rate=1.5)).value
    dirty = op_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY, rate=1.5)).value
    assert dirty > clean


def test_positive_dependence_orderings_at_theta_25():
    dep = DependenceModel.clayton(25.0)
    rate = 1.5
    op_d_i = op_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY, rate=rate)).value
    op_d_c = op_dirty_correlated(
        _scenario(Scenario.DOUBLY_DIRTY, dependence=dep, rate=rate)
    ).value
    op_c_i = op_clean_independent(_scenario(rate=rate)).value
    op_c_c = op_clean_correlated(_scenario(dependence=dep, rate=rate)).value
    ac_d_i = ac_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY, rate=rate)).value
    ac_d_c = ac_dirty_correlated(
        _scenario(Scenario.DOUBLY_DIRTY, dependence=dep, rate=rate)
    ).value
    # positive dependence helps the minimum-limited channel and hurts the sum
    assert op_d_c <= op_d_i + 1e-9
    assert ac_d_c >= ac_d_i - 1e-9
    assert op_c_c >= op_c_i - 1e-9


def test_weak_dependence_recovers_independent_values():
    dep = DependenceModel.clayton(1e-4)
    rate = 1.5
    pairs_op = [
        (op_clean_correlated(_scenario(dependence=dep, rate=rate)).value,
         op_clean_independent(_scenario(rate=rate)).value),
        (op_dirty_correlated(
            _scenario(Scenario.DOUBLY_DIRTY, dependence=dep, rate=rate)).value,
         op_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY, rate=rate)).value),
    ]
    for corr, indep in pairs_op:
        assert corr == pytest.approx(indep, abs=1e-3)
    ac_c = ac_clean_correlated(_scenario(dependence=dep)).value
    ac_i = ac_clean_independent(_scenario()).value
    assert ac_c == pytest.approx(ac_i, abs=1e-2)
    acd_c = ac_dirty_correlated(_scenario(Scenario.DOUBLY_DIRTY, dependence=dep)).value
    acd_i = ac_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY)).value
    assert acd_c == pytest.approx(acd_i, abs=1e-2)


def test_ac_vanishes_with_mean_snr():
    tiny = FadingParams(2.0, 3.0, 1e-9)
    sc = _scenario(Scenario.DOUBLY_DIRTY, link1=tiny, rate=None)
    assert ac_dirty_independent(sc).value == pytest.approx(0.0, abs=1e-6)


def test_ac_nondecreasing_in_mean_snr():
    means = [0.5, 2.0, 8.0, 32.0]
    dirty = [
        ac_dirty_independent(
            _scenario(Scenario.DOUBLY_DIRTY, link1=FadingParams(2.0, 3.0, g), rate=None)
        ).value
        for g in means
    ]
    clean = [
        ac_clean_independent(
            _scenario(link1=FadingParams(2.0, 3.0, g), rate=None)
        ).value
        for g in means
    ]
    assert all(a < b for a, b in zip(dirty, dirty[1:]))
    assert all(a < b for a, b in zip(clean, clean[1:]))


def test_clean_capacity_exceeds_dirty_capacity():
    ac_c = ac_clean_independent(_scenario(rate=None)).value
    ac_d = ac_dirty_independent(_scenario(Scenario.DOUBLY_DIRTY, rate=None)).value
    assert ac_c > ac_d


# ---------------------------------------------------------------------------
# diagnostic series route
# ---------------------------------------------------------------------------


def test_series_route_reports_divergence(clean_indep_2_3_10):
    with pytest.raises(SeriesDivergenceError) as excinfo:
        ac_clean_independent(clean_indep_2_3_10, method=Method.SERIES)
    err = excinfo.value
    assert isinstance(err.k_stop, int)
    assert err.partial == err.partial  # carried and not NaN


# ---------------------------------------------------------------------------
# correlation coefficient
# ---------------------------------------------------------------------------


def test_correlation_coefficient_reference_cell():
    link = FadingParams(5.0, 5.0, 1.0)
    est = correlation_coefficient(
        link, link, DependenceModel.clayton(40.0),
        mc=McConfig(n_samples=1_000_000, seed=20240521),
    )
    assert est.value == pytest.approx(0.8574, abs=0.015)
    assert est.err > 0.0


def test_correlation_coefficient_independent_near_zero():
    link = FadingParams(5.0, 5.0, 1.0)
    est = correlation_coefficient(
        link, link, DependenceModel.independent(),
        mc=McConfig(n_samples=1_000_000, seed=20240521),
    )
    assert est.value == pytest.approx(0.0, abs=0.005)
