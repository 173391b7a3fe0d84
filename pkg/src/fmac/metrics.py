"""Outage probability and average capacity of the two-user multiple access
channel, by closed form, direct quadrature, series, and Monte Carlo.

Channel models
--------------
Two transmitters with instantaneous SNRs (g1, g2) share the channel.

* ``clean``: decoding succeeds at sum rate ``0.5 * log2(1 + g1 + g2)``;
  outage is ``P(g1 + g2 <= threshold)``.
* ``doubly_dirty``: both transmitters face known interference they must
  pre-cancel; the achievable rate collapses to
  ``0.5 * log2(1 + min(g1, g2))``, and outage is ``P(min(g1, g2) <= t)``.

Each link's SNR is Fisher-Snedecor F distributed (:mod:`fmac.fading`); the
pair is coupled by the dependence model (:mod:`fmac.copula`).  Every metric
is available through at least two independent computational routes so each
value can be cross-checked:

======================  ============================================
metric                  routes
======================  ============================================
OP, clean, independent  closed form (double contour), quadrature, MC
OP, clean, correlated   quadrature (conditional copula), MC
OP, dirty, independent  closed form (CDF algebra), quadrature, MC
OP, dirty, correlated   closed form (copula survival), quadrature, MC
AC, clean, independent  quadrature (2-D), series (diagnostic), MC
AC, clean, correlated   quadrature (2-D), MC
AC, dirty, independent  closed form (contour J-terms), quadrature, MC
AC, dirty, correlated   quadrature (2-D), MC
correlation rho         MC
======================  ============================================

The clean-MAC closed form deserves a note.  The outage integral
``int_0^t F1(t - x) f2(x) dx`` Mellin-transforms into a double contour
integral whose inner factor is the *bounded* beta integral
``int_0^t x**(-s) (t-x)**(-zeta) dx``; evaluating that bounded integral
exactly yields the kernel implemented in ``_op_clean_closed_spec`` (a
``1/Gamma(2 - s1 - s2)`` coupling, all arguments positive).  Replacing it
with the unbounded-range reflection formula produces the superficially
similar kernel of :func:`op_clean_independent_reflection_kernel` with a
``Gamma(s1 + s2 - 1)`` coupling and a negated argument; that variant is kept
only as a diagnostic because its principal-branch value is complex and does
not reproduce the outage probability (see the tests).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import copula, fading, mcsim, quad
from .copula import DependenceModel
from .fading import FadingParams
from .meijer import (
    BivariateGSpec,
    ContourError,
    GBlock,
    MeijerGSpec,
    bivariate_meijer_g_with_error,
    meijer_g_with_error,
)

__all__ = [
    "Scenario",
    "Method",
    "MacScenario",
    "Estimate",
    "SeriesDivergenceError",
    "DEFAULT_MC",
    "DEFAULT_SEED",
    "op_clean_independent",
    "op_clean_correlated",
    "op_dirty_independent",
    "op_dirty_correlated",
    "ac_clean_independent",
    "ac_clean_correlated",
    "ac_dirty_independent",
    "ac_dirty_correlated",
    "correlation_coefficient",
    "op_clean_independent_reflection_kernel",
    "awgn_reference_capacity",
]

_LN2 = float(np.log(2.0))


class Scenario(str, enum.Enum):
    """Decoder situation of the two-user MAC."""

    CLEAN = "clean"
    DOUBLY_DIRTY = "doubly_dirty"


class Method(str, enum.Enum):
    """Computational route used to produce an estimate."""

    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    SERIES = "series"
    MONTE_CARLO = "monte_carlo"


class SeriesDivergenceError(ArithmeticError):
    """The capacity series failed its self-consistency checks.

    Carries the partial sum and the index of the smallest term so callers
    can report how far the series got before misbehaving.
    """

    def __init__(self, message: str, partial: complex, k_stop: int):
        super().__init__(message)
        self.partial = partial
        self.k_stop = k_stop


@dataclass(frozen=True)
class MacScenario:
    """Full problem statement: decoder situation, two links, dependence, rate.

    ``rate_threshold`` (bits/s/Hz) is only meaningful for outage metrics;
    capacity metrics ignore it.  The corresponding SNR threshold is
    ``2**(2 * rate_threshold) - 1``.
    """

    scenario: Scenario
    link1: FadingParams
    link2: FadingParams
    dependence: DependenceModel
    rate_threshold: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if self.rate_threshold is not None:
            rt = float(self.rate_threshold)
            if not (np.isfinite(rt) and rt > 0.0):
                raise ValueError(f"rate_threshold must be positive, got {rt}")
            object.__setattr__(self, "rate_threshold", rt)

    @property
    def snr_threshold(self) -> float:
        if self.rate_threshold is None:
            raise ValueError("scenario has no rate_threshold set")
        return float(2.0 ** (2.0 * self.rate_threshold) - 1.0)


@dataclass(frozen=True)
class Estimate:
    """A metric value with an error measure and the route that produced it.

    ``err`` is route-specific: quadrature reports its absolute error
    estimate, closed forms propagate the contour-integration error estimate,
    Monte Carlo reports one standard error.  ``converged`` is False when an
    adaptive rule exhausted its budget; the value is still the best
    available and the error estimate remains honest.
    """

    value: float
    err: float
    method: Method
    converged: bool = True

    def __post_init__(self) -> None:
        if not np.isfinite(self.value):
            raise ValueError(f"estimate value must be finite, got {self.value}")
        if not (self.err >= 0.0):
            raise ValueError(f"estimate err must be non-negative, got {self.err}")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "converged", bool(self.converged))


DEFAULT_SEED = 20240521
DEFAULT_MC = mcsim.McConfig(n_samples=10**6, seed=DEFAULT_SEED)


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _require_dependence(scenario: MacScenario, kind: str, op_name: str) -> None:
    if scenario.dependence.kind != kind:
        raise ValueError(
            f"{op_name} requires a {kind!r} dependence model, "
            f"got {scenario.dependence.kind!r}"
        )


def _as_probability(value: float, err: float, what: str) -> float:
    """Snap tiny numerical excursions outside [0, 1] back onto the boundary."""
    slack = max(err, 1e-9)
    if -slack <= value <= 1.0 + slack:
        return float(min(max(value, 0.0), 1.0))
    raise ArithmeticError(f"{what} produced {value}, far outside [0, 1]")


def _log_a(params: FadingParams) -> float:
    """log of the density prefactor lam / (Gamma(m) Gamma(m_s))."""
    return float(np.log(params.lam) - gammaln(params.m) - gammaln(params.m_s))


def _log_b(params: FadingParams) -> float:
    """log of the CDF prefactor 1 / (Gamma(m) Gamma(m_s))."""
    return float(-gammaln(params.m) - gammaln(params.m_s))


def _mc(config: mcsim.McConfig | None) -> mcsim.McConfig:
    return DEFAULT_MC if config is None else config


def _rate(effective_snr: np.ndarray) -> np.ndarray:
    return 0.5 * np.log2(1.0 + effective_snr)


def awgn_reference_capacity(scenario: MacScenario) -> float:
    """Capacity of the same channel with fading frozen at the mean SNRs.

    Used by the CLI to express metrics relative to the no-fading baseline.
    """
    a1 = scenario.link1.mean_snr
    a2 = scenario.link2.mean_snr
    if scenario.scenario == Scenario.CLEAN:
        return float(_rate(np.asarray(a1 + a2)))
    return float(_rate(np.asarray(min(a1, a2))))


# ---------------------------------------------------------------------------
# outage probability, clean MAC
# ---------------------------------------------------------------------------


def _op_clean_quadrature(scenario: MacScenario) -> Estimate:
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold

    def integrand(xs: np.ndarray) -> np.ndarray:
        return fading.cdf(p1, t - xs) * fading.pdf(p2, xs)

    r = quad.integrate_finite(integrand, 0.0, t, 1e-10, singular=True, vectorized=True)
    value = _as_probability(r.value, r.err_estimate, "clean-MAC outage quadrature")
    return Estimate(value=value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)


def _op_clean_closed_spec(scenario: MacScenario) -> BivariateGSpec:
    """Double-contour representation of P(g1 + g2 <= t), bounded-kernel form.

    Variable 1 carries the link-1 CDF kernel
    ``Gamma(m1+s) Gamma(m1s-s) Gamma(-s)`` (the ``1/Gamma(1-s)`` factor of
    the CDF kernel cancels against the beta integral), variable 2 the link-2
    density kernel ``Gamma(m2-1+s) Gamma(1-s) Gamma(1+m2s-s)``, and the
    bounded threshold integral contributes the ``1/Gamma(2 - s1 - s2)``
    coupling.  Both arguments are ``t * lam`` of the respective link.
    """
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    return BivariateGSpec(
        joint=GBlock(m=0, n=0, a=(), b=(-1.0,)),
        block1=GBlock(m=1, n=2, a=(1.0 - p1.m_s, 1.0), b=(p1.m,)),
        block2=GBlock(m=1, n=2, a=(0.0, -p2.m_s), b=(p2.m - 1.0,)),
        z1=t * p1.lam,
        z2=t * p2.lam,
    )


def _op_clean_closed(scenario: MacScenario) -> Estimate:
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    spec = _op_clean_closed_spec(scenario)
    v, err, _ = bivariate_meijer_g_with_error(spec, tol=1e-10)
    pref = t * np.exp(_log_b(p1)) * p2.lam * np.exp(_log_b(p2))
    value = pref * v.real
    err = pref * err
    value = _as_probability(value, err, "clean-MAC outage closed form")
    return Estimate(value=value, err=err, method=Method.CLOSED_FORM)


def op_clean_independent_reflection_kernel(scenario: MacScenario) -> complex:
    """Diagnostic: the clean-MAC outage kernel with the threshold integral
    evaluated by the unbounded reflection formula instead of the bounded
    beta integral.

    The coupling becomes ``Gamma(s1 + s2 - 1)`` and the second argument is
    negated, which forces a branch choice; under the principal branch the
    result is complex and does **not** equal the outage probability.
    Returned raw (prefactor applied, no clamping) for comparison in tests.
    """
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    spec = BivariateGSpec(
        joint=GBlock(m=1, n=0, a=(), b=(-1.0,)),
        block1=GBlock(m=1, n=1, a=(1.0 - p1.m_s, 1.0), b=(p1.m,)),
        block2=GBlock(m=1, n=2, a=(0.0, -p2.m_s), b=(p2.m - 1.0,)),
        z1=t * p1.lam,
        z2=-t * p2.lam,
    )
    contours = _reflection_contours(p1, p2)
    v, _, _ = bivariate_meijer_g_with_error(spec, tol=1e-6, contours=contours)
    pref = -t * np.exp(_log_b(p1)) * p2.lam * np.exp(_log_b(p2))
    return complex(pref * v)


def _reflection_contours(p1: FadingParams, p2: FadingParams) -> tuple[float, float]:
    """Contours for the reflection kernel: c2 < 1, c2 > 1 - m2, c1 + c2 > 1,
    -m1 < c1 < m1s."""
    c2 = max(0.9, 1.0 - 0.45 * min(p2.m, 1.0))
    need = 1.0 - c2  # c1 must exceed this
    hi = min(p1.m_s, 1.0)
    c1 = max(0.6 * hi, min(0.8 * hi, need + 0.25 * hi))
    if not (c1 + c2 > 1.0 and -p1.m < c1 < p1.m_s and 1.0 - p2.m < c2 < 1.0):
        raise ValueError("no admissible contour pair for the reflection kernel")
    return c1, c2


def op_clean_independent(
    scenario: MacScenario,
    method: Method = Method.QUADRATURE,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """P(g1 + g2 <= threshold) for independent links."""
    _require_dependence(scenario, copula.KIND_INDEPENDENT, "op_clean_independent")
    method = Method(method)
    if method == Method.CLOSED_FORM:
        return _op_clean_closed(scenario)
    if method == Method.QUADRATURE:
        return _op_clean_quadrature(scenario)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_op(scenario, _mc(mc), stream)
    raise ValueError(f"no {method.value} route for op_clean_independent")


def op_clean_correlated(
    scenario: MacScenario,
    method: Method = Method.QUADRATURE,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """P(g1 + g2 <= threshold) under a Clayton-coupled pair.

    Quadrature route: writing u1 for the link-1 grade, the outage region is
    ``{u2 <= tau(u1)}`` with ``tau = F2(t - Q1(u1))``, so the probability is
    the conditional-copula integral ``int_0^{F1(t)} dC/du1(u1, tau(u1)) du1``
    (the integrand vanishes identically above ``F1(t)``).
    """
    _require_dependence(scenario, copula.KIND_CLAYTON, "op_clean_correlated")
    method = Method(method)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_op(scenario, _mc(mc), stream)
    if method != Method.QUADRATURE:
        raise ValueError(f"no {method.value} route for op_clean_correlated")
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    model = scenario.dependence
    u_star = fading.cdf(p1, t)
    if u_star <= 0.0:
        return Estimate(value=0.0, err=0.0, method=Method.QUADRATURE)

    def integrand(us: np.ndarray) -> np.ndarray:
        taus = fading.tau_transform(p1, p2, t, us)
        return copula.partial_u1(model, us, taus)

    r = quad.integrate_finite(
        integrand, 0.0, float(u_star), 1e-10, singular=True, vectorized=True
    )
    value = _as_probability(r.value, r.err_estimate, "clean-MAC correlated outage")
    return Estimate(value=value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)


# ---------------------------------------------------------------------------
# outage probability, doubly dirty MAC
# ---------------------------------------------------------------------------


def op_dirty_independent(
    scenario: MacScenario,
    method: Method = Method.CLOSED_FORM,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """P(min(g1, g2) <= threshold) for independent links."""
    _require_dependence(scenario, copula.KIND_INDEPENDENT, "op_dirty_independent")
    method = Method(method)
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    if method == Method.CLOSED_FORM:
        f1 = fading.cdf(p1, t)
        f2 = fading.cdf(p2, t)
        value = f1 + f2 - f1 * f2
        return Estimate(value=float(value), err=0.0, method=Method.CLOSED_FORM)
    if method == Method.QUADRATURE:

        def integrand(xs: np.ndarray) -> np.ndarray:
            return fading.pdf(p1, xs) * (1.0 - fading.cdf(p2, xs)) + fading.pdf(
                p2, xs
            ) * (1.0 - fading.cdf(p1, xs))

        r = quad.integrate_finite(integrand, 0.0, t, 1e-10, singular=True, vectorized=True)
        value = _as_probability(r.value, r.err_estimate, "dirty-MAC outage quadrature")
        return Estimate(value=value, err=r.err_estimate, method=Method.QUADRATURE,
                        converged=r.converged)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_op(scenario, _mc(mc), stream)
    raise ValueError(f"no {method.value} route for op_dirty_independent")


def op_dirty_correlated(
    scenario: MacScenario,
    method: Method = Method.CLOSED_FORM,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """P(min(g1, g2) <= threshold) under a Clayton-coupled pair.

    Closed form: ``F1 + F2 - C(F1, F2)`` (inclusion-exclusion through the
    copula).  Quadrature route: one minus the copula mass of the joint
    survival rectangle, integrated directly against the copula density.
    """
    _require_dependence(scenario, copula.KIND_CLAYTON, "op_dirty_correlated")
    method = Method(method)
    p1, p2 = scenario.link1, scenario.link2
    t = scenario.snr_threshold
    model = scenario.dependence
    f1 = float(fading.cdf(p1, t))
    f2 = float(fading.cdf(p2, t))
    if method == Method.CLOSED_FORM:
        value = f1 + f2 - float(copula.cdf(model, f1, f2))
        return Estimate(
            value=_as_probability(value, 0.0, "dirty-MAC correlated outage"),
            err=0.0,
            method=Method.CLOSED_FORM,
        )
    if method == Method.QUADRATURE:
        if f1 >= 1.0 or f2 >= 1.0:
            return Estimate(value=1.0, err=0.0, method=Method.QUADRATURE)

        def integrand(u1s: np.ndarray, u2: float) -> np.ndarray:
            return copula.density(model, u1s, np.full_like(u1s, u2))

        r = quad.integrate_2d(
            integrand, f1, 1.0, f2, 1.0, 1e-9, singular=True, vectorized_inner=True
        )
        value = _as_probability(
            1.0 - r.value, r.err_estimate, "dirty-MAC correlated outage quadrature"
        )
        return Estimate(value=value, err=r.err_estimate, method=Method.QUADRATURE,
                        converged=r.converged)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_op(scenario, _mc(mc), stream)
    raise ValueError(f"no {method.value} route for op_dirty_correlated")


# ---------------------------------------------------------------------------
# average capacity, clean MAC
# ---------------------------------------------------------------------------


def _ac_clean_quadrature(scenario: MacScenario) -> Estimate:
    p1, p2 = scenario.link1, scenario.link2

    def integrand(xs: np.ndarray, y: float) -> np.ndarray:
        return _rate(xs + y) * fading.pdf(p1, xs) * fading.pdf(p2, y)

    r = quad.integrate_2d(
        integrand, 0.0, np.inf, 0.0, np.inf, 1e-8, singular=True, vectorized_inner=True
    )
    return Estimate(value=r.value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)


def _ac_clean_series(scenario: MacScenario, k_max: int = 40) -> Estimate:
    """Capacity series in powers of the smaller rate constant.

    Term ``k`` couples ``(-lam2)**(k+1) / (k! (k+1)**2)`` with a univariate
    G value at ``-lam1/lam2``.  The negative argument makes every term
    complex under the principal branch, so the partial sums are monitored:
    the sum is accepted only while terms decay and the accumulated imaginary
    part stays negligible, and the first violation raises
    :class:`SeriesDivergenceError` carrying the partial sum.
    """
    p1, p2 = scenario.link1, scenario.link2
    lam1, lam2 = p1.lam, p2.lam
    log_pref = _log_a(p1) + _log_a(p2) - np.log(2.0 * _LN2)
    z = -lam1 / lam2
    total = 0.0 + 0.0j
    prev_mag = np.inf
    for k in range(k_max + 1):
        spec = MeijerGSpec(
            m=2,
            n=3,
            p=3,
            q=3,
            a=(0.0, -p1.m_s, k - p2.m + 1.0),
            b=(p1.m - 1.0, k + p2.m_s, float(k)),
            z=z,
        )
        try:
            g_val, _, _ = meijer_g_with_error(spec, tol=1e-10)
        except ContourError as exc:
            raise SeriesDivergenceError(
                f"capacity series term k={k} has no pole-separating contour "
                f"({exc})",
                partial=total,
                k_stop=k,
            ) from exc
        log_coef = (k + 1.0) * np.log(lam2) - gammaln(k + 1.0) - 2.0 * np.log(k + 1.0)
        term = (-1.0) ** (k + 1) * np.exp(log_pref + log_coef) * g_val
        total += term
        mag = abs(term)
        if k >= 1 and mag > prev_mag:
            raise SeriesDivergenceError(
                f"capacity series terms grew at k={k} "
                f"(|term| {prev_mag:.3e} -> {mag:.3e})",
                partial=total - term,
                k_stop=k,
            )
        if abs(total.imag) > 1e-6 * max(abs(total.real), 1.0):
            raise SeriesDivergenceError(
                f"capacity series accumulated a non-negligible imaginary part "
                f"({total.imag:.3e}) by k={k}",
                partial=total,
                k_stop=k,
            )
        if mag <= 1e-10 * max(abs(total.real), 1.0):
            break
        prev_mag = mag
    else:
        raise SeriesDivergenceError(
            f"capacity series did not settle within {k_max + 1} terms",
            partial=total,
            k_stop=k_max,
        )
    # Converged partial sums must be consistent with a real, positive
    # capacity; a sum dominated by its imaginary part means the term-wise
    # branch choices do not cohere and the value is unusable.
    if not (total.real > 0.0 and abs(total.imag) <= 1e-3 * abs(total.real)):
        raise SeriesDivergenceError(
            f"capacity series settled on {complex(total):.6e}, which fails the "
            "realness/positivity self-check",
            partial=total,
            k_stop=k,
        )
    return Estimate(value=float(total.real), err=abs(total.imag) + mag, method=Method.SERIES)


def ac_clean_independent(
    scenario: MacScenario,
    method: Method = Method.QUADRATURE,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """E[0.5 * log2(1 + g1 + g2)] for independent links."""
    _require_dependence(scenario, copula.KIND_INDEPENDENT, "ac_clean_independent")
    method = Method(method)
    if method == Method.QUADRATURE:
        return _ac_clean_quadrature(scenario)
    if method == Method.SERIES:
        return _ac_clean_series(scenario)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_ac(scenario, _mc(mc), stream)
    raise ValueError(f"no {method.value} route for ac_clean_independent")


def ac_clean_correlated(
    scenario: MacScenario,
    method: Method = Method.QUADRATURE,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """E[0.5 * log2(1 + g1 + g2)] under a Clayton-coupled pair.

    Quadrature route: grade out link 1 (u1) and keep link 2 in SNR space:
    ``int_0^1 du1 int_0^inf dy  rate(Q1(u1) + y) c(u1, F2(y)) f2(y)``.
    """
    _require_dependence(scenario, copula.KIND_CLAYTON, "ac_clean_correlated")
    method = Method(method)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_ac(scenario, _mc(mc), stream)
    if method != Method.QUADRATURE:
        raise ValueError(f"no {method.value} route for ac_clean_correlated")
    p1, p2 = scenario.link1, scenario.link2
    model = scenario.dependence

    def integrand(ys: np.ndarray, u1: float) -> np.ndarray:
        q1 = fading.quantile(p1, u1)
        if not np.isfinite(q1):
            return np.zeros_like(ys)
        grades2 = fading.cdf(p2, ys)
        return (
            _rate(q1 + ys)
            * copula.density(model, np.full_like(ys, u1), grades2)
            * fading.pdf(p2, ys)
        )

    r = quad.integrate_2d(
        integrand, 0.0, np.inf, 0.0, 1.0, 1e-8, singular=True, vectorized_inner=True
    )
    return Estimate(value=r.value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)


# ---------------------------------------------------------------------------
# average capacity, doubly dirty MAC
# ---------------------------------------------------------------------------


def _j_single(params: FadingParams) -> tuple[float, float]:
    """Contour value of E-like term  J(p) = int rate(g) f_p(g) dg  in closed
    form: a univariate G at 1/lam with the log-kernel merged in."""
    lam = params.lam
    spec = MeijerGSpec(
        m=2,
        n=3,
        p=3,
        q=3,
        a=(1.0, 1.0, 1.0 - params.m),
        b=(1.0, params.m_s, 0.0),
        z=1.0 / lam,
    )
    v, err, _ = meijer_g_with_error(spec, tol=1e-10)
    pref = np.exp(_log_a(params)) / (2.0 * lam * _LN2)
    return float(pref * v.real), float(pref * err)


def _j_cross(pa: FadingParams, pb: FadingParams) -> tuple[float, float]:
    """Contour value of  int rate(g) f_a(g) F_b(g) dg  (rate against one
    density and the other CDF): bivariate G with the log kernel on the
    second variable and the joint block carrying the link-a gammas."""
    lama, lamb = pa.lam, pb.lam
    spec = BivariateGSpec(
        joint=GBlock(m=1, n=1, a=(1.0 - pa.m,), b=(pa.m_s,)),
        block1=GBlock(m=1, n=2, a=(1.0 - pb.m_s, 1.0), b=(pb.m, 0.0)),
        block2=GBlock(m=1, n=2, a=(1.0, 1.0), b=(1.0, 0.0)),
        z1=lamb / lama,
        z2=1.0 / lama,
    )
    v, err, _ = bivariate_meijer_g_with_error(spec, tol=1e-9)
    pref = np.exp(_log_a(pa) + _log_b(pb)) / (2.0 * lama * _LN2)
    return float(pref * v.real), float(pref * err)


def _ac_dirty_closed(scenario: MacScenario) -> Estimate:
    """E[rate(min)] = J(1) - J(1|2) + J(2) - J(2|1): expand
    ``E[rate(min)] = E[rate(g1)(1 - F2(g1))] + E[rate(g2)(1 - F1(g2))]``
    and evaluate each piece on the contour."""
    p1, p2 = scenario.link1, scenario.link2
    j1, e1 = _j_single(p1)
    j2, e2 = _j_cross(p1, p2)
    j3, e3 = _j_single(p2)
    j4, e4 = _j_cross(p2, p1)
    value = j1 - j2 + j3 - j4
    err = e1 + e2 + e3 + e4
    return Estimate(value=value, err=err, method=Method.CLOSED_FORM)


def ac_dirty_independent(
    scenario: MacScenario,
    method: Method = Method.CLOSED_FORM,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """E[0.5 * log2(1 + min(g1, g2))] for independent links."""
    _require_dependence(scenario, copula.KIND_INDEPENDENT, "ac_dirty_independent")
    method = Method(method)
    if method == Method.CLOSED_FORM:
        return _ac_dirty_closed(scenario)
    if method == Method.QUADRATURE:
        p1, p2 = scenario.link1, scenario.link2

        def integrand(gs: np.ndarray) -> np.ndarray:
            return _rate(gs) * (
                fading.pdf(p1, gs) * (1.0 - fading.cdf(p2, gs))
                + fading.pdf(p2, gs) * (1.0 - fading.cdf(p1, gs))
            )

        r = quad.integrate_semi_infinite(integrand, 0.0, 1e-9, singular=True, vectorized=True)
        return Estimate(value=r.value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_ac(scenario, _mc(mc), stream)
    raise ValueError(f"no {method.value} route for ac_dirty_independent")


def ac_dirty_correlated(
    scenario: MacScenario,
    method: Method = Method.QUADRATURE,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """E[0.5 * log2(1 + min(g1, g2))] under a Clayton-coupled pair.

    Quadrature route: both links graded out, integrating
    ``rate(min(Q1(u1), Q2(u2))) c(u1, u2)`` over the unit square.
    """
    _require_dependence(scenario, copula.KIND_CLAYTON, "ac_dirty_correlated")
    method = Method(method)
    if method == Method.MONTE_CARLO:
        return mcsim.estimate_ac(scenario, _mc(mc), stream)
    if method != Method.QUADRATURE:
        raise ValueError(f"no {method.value} route for ac_dirty_correlated")
    p1, p2 = scenario.link1, scenario.link2
    model = scenario.dependence

    def integrand(u1s: np.ndarray, u2: float) -> np.ndarray:
        q2 = fading.quantile(p2, u2)
        q1s = fading.quantile(p1, u1s)
        eff = np.minimum(q1s, q2)
        rates = np.where(np.isfinite(eff), _rate(np.where(np.isfinite(eff), eff, 0.0)), 0.0)
        return rates * copula.density(model, u1s, np.full_like(u1s, u2))

    r = quad.integrate_2d(
        integrand, 0.0, 1.0, 0.0, 1.0, 1e-8, singular=True, vectorized_inner=True
    )
    return Estimate(value=r.value, err=r.err_estimate, method=Method.QUADRATURE,
                    converged=r.converged)


# ---------------------------------------------------------------------------
# correlation
# ---------------------------------------------------------------------------


def correlation_coefficient(
    link1: FadingParams,
    link2: FadingParams,
    dependence: DependenceModel,
    mc: mcsim.McConfig | None = None,
    stream: int = 0,
) -> Estimate:
    """Pearson correlation of the SNR pair (Monte Carlo)."""
    return mcsim.estimate_rho(link1, link2, dependence, _mc(mc), stream)
