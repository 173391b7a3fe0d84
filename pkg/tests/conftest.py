"""Shared fixtures and a deterministic hypothesis profile.

The whole suite must be reproducible run-to-run (the determinism guarantees
extend to the tests themselves), so hypothesis is pinned to its derandomized
mode and Monte Carlo tests always pass explicit seeds.
"""

import pytest
from hypothesis import HealthCheck, settings

from fmac import DependenceModel, FadingParams, MacScenario, Scenario

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")


@pytest.fixture(scope="session")
def link_2_3_10() -> FadingParams:
    """Workhorse link: moderate severity, light-to-moderate shadowing."""
    return FadingParams(m=2.0, m_s=3.0, mean_snr=10.0)


@pytest.fixture(scope="session")
def clean_indep_2_3_10(link_2_3_10) -> MacScenario:
    """Symmetric clean-channel scenario used by most cross-method checks."""
    return MacScenario(
        scenario=Scenario.CLEAN,
        link1=link_2_3_10,
        link2=link_2_3_10,
        dependence=DependenceModel.independent(),
        rate_threshold=2.5,
    )


@pytest.fixture(scope="session")
def dirty_indep_2_3_10(link_2_3_10) -> MacScenario:
    return MacScenario(
        scenario=Scenario.DOUBLY_DIRTY,
        link1=link_2_3_10,
        link2=link_2_3_10,
        dependence=DependenceModel.independent(),
        rate_threshold=2.5,
    )
