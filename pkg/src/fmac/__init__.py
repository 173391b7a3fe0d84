"""Outage probability and average capacity of two-user multiple access
channels under (possibly Clayton-coupled) Fisher-Snedecor F fading.

The public surface mirrors the module layout:

- :mod:`fmac.fading`  — single-link SNR distribution (pdf/cdf/quantile)
- :mod:`fmac.copula`  — Clayton dependence model on the unit square
- :mod:`fmac.metrics` — outage probability and average capacity routes
- :mod:`fmac.mcsim`   — deterministic substreamed Monte-Carlo estimators
- :mod:`fmac.meijer`  — contour-integration engine behind the closed forms
- :mod:`fmac.quad`    — adaptive quadrature wrappers
- :mod:`fmac.specfun` — regularized-beta utilities

Each metric is exposed through three independent computational routes
(closed form, quadrature, Monte Carlo) so results can always be
cross-checked; the ``fmac validate`` CLI command runs that cross-check.
"""

from .copula import DependenceModel
from .fading import FadingParams
from .mcsim import McConfig
from .metrics import (
    DEFAULT_SEED,
    Estimate,
    MacScenario,
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

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_SEED",
    "DependenceModel",
    "Estimate",
    "FadingParams",
    "MacScenario",
    "McConfig",
    "Method",
    "Scenario",
    "SeriesDivergenceError",
    "__version__",
    "ac_clean_correlated",
    "ac_clean_independent",
    "ac_dirty_correlated",
    "ac_dirty_independent",
    "awgn_reference_capacity",
    "correlation_coefficient",
    "op_clean_correlated",
    "op_clean_independent",
    "op_dirty_correlated",
    "op_dirty_independent",
]
