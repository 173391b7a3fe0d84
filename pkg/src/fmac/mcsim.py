"""Monte-Carlo estimation of the channel metrics.

Sampling is the mirror image of the analytic model: draw a grade pair
(u1, u2) from the dependence structure, then push each grade through the
corresponding link's SNR quantile.  This exercises exactly the copula and
quantile code the closed forms are built from, so Monte Carlo is a genuinely
independent route only through the *metric* definitions (event counting and
sample means), which is what it is used to validate.

Reproducibility: all randomness flows from a counter-based Philox generator
keyed by ``SeedSequence(entropy=seed, spawn_key=(stream,))``.  Distinct
``stream`` indices give provably independent substreams for the same user
seed, which is how parameter sweeps stay deterministic regardless of
execution order or worker count.  Batching only limits memory; results are
identical for any batch size because the draw order is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import copula, fading

__all__ = [
    "McConfig",
    "sample_snr_pair",
    "sample_snr_pairs",
    "estimate_op",
    "estimate_ac",
    "estimate_rho",
]


@dataclass(frozen=True)
class McConfig:
    """Sample budget, seed, and memory-bounding batch size."""

    n_samples: int
    seed: int
    batch: int = 1 << 20

    def __post_init__(self) -> None:
        if int(self.n_samples) < 1:
            raise ValueError("n_samples must be at least 1")
        if int(self.batch) < 1:
            raise ValueError("batch must be at least 1")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "batch", int(self.batch))
        object.__setattr__(self, "seed", int(self.seed))


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator on substream ``stream`` of the given seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def sample_snr_pairs(
    link1: fading.FadingParams,
    link2: fading.FadingParams,
    dependence: copula.DependenceModel,
    rng: np.random.Generator,
    n: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` SNR pairs: copula grades mapped through the link quantiles."""
    u1, u2 = copula.sample_pairs(dependence, rng, n)
    g1 = fading.quantile(link1, u1)
    g2 = fading.quantile(link2, u2)
    return g1, g2


def sample_snr_pair(
    link1: fading.FadingParams,
    link2: fading.FadingParams,
    dependence: copula.DependenceModel,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Draw a single SNR pair."""
    g1, g2 = sample_snr_pairs(link1, link2, dependence, rng, 1)
    return float(g1[0]), float(g2[0])


def _batches(config: McConfig):
    remaining = config.n_samples
    while remaining > 0:
        take = min(remaining, config.batch)
        remaining -= take
        yield take


def _combine_mean_m2(
    n_a: int, mean_a: float, m2_a: float, n_b: int, mean_b: float, m2_b: float
) -> tuple[int, float, float]:
    """Pairwise update of (count, mean, centered second moment)."""
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (n_b / n)
    m2 = m2_a + m2_b + delta * delta * (n_a * n_b / n)
    return n, mean, m2


def estimate_op(scenario, config: McConfig, stream: int = 0):
    """Outage probability as an event frequency, with binomial standard error."""
    from .metrics import Estimate, Method, Scenario

    rng = generator(config.seed, stream)
    threshold = scenario.snr_threshold
    hits = 0
    for take in _batches(config):
        g1, g2 = sample_snr_pairs(
            scenario.link1, scenario.link2, scenario.dependence, rng, take
        )
        if scenario.scenario == Scenario.CLEAN:
            effective = g1 + g2
        else:
            effective = np.minimum(g1, g2)
        hits += int(np.count_nonzero(effective <= threshold))
    n = config.n_samples
    p = hits / n
    se = float(np.sqrt(p * (1.0 - p) / n))
    return Estimate(value=p, err=se, method=Method.MONTE_CARLO)


def estimate_ac(scenario, config: McConfig, stream: int = 0):
    """Average capacity as a sample mean of per-draw rates, with its SE."""
    from .metrics import Estimate, Method, Scenario

    rng = generator(config.seed, stream)
    n_tot, mean, m2 = 0, 0.0, 0.0
    for take in _batches(config):
        g1, g2 = sample_snr_pairs(
            scenario.link1, scenario.link2, scenario.dependence, rng, take
        )
        if scenario.scenario == Scenario.CLEAN:
            effective = g1 + g2
        else:
            effective = np.minimum(g1, g2)
        rates = 0.5 * np.log2(1.0 + effective)
        b_mean = float(np.mean(rates))
        b_m2 = float(np.sum((rates - b_mean) ** 2))
        n_tot, mean, m2 = _combine_mean_m2(n_tot, mean, m2, take, b_mean, b_m2)
    var = m2 / (n_tot - 1) if n_tot > 1 else 0.0
    se = float(np.sqrt(var / n_tot))
    return Estimate(value=mean, err=se, method=Method.MONTE_CARLO)


def estimate_rho(
    link1: fading.FadingParams,
    link2: fading.FadingParams,
    dependence: copula.DependenceModel,
    config: McConfig,
    stream: int = 0,
):
    """Pearson correlation of the SNR pair, with the Fisher-z standard error.

    Streaming pairwise-combined moments keep the covariance numerically
    stable for the heavy-tailed draws that light shadowing produces.
    """
    from .metrics import Estimate, Method

    rng = generator(config.seed, stream)
    n_tot = 0
    mean1 = mean2 = 0.0
    m2_1 = m2_2 = c2 = 0.0
    for take in _batches(config):
        g1, g2 = sample_snr_pairs(link1, link2, dependence, rng, take)
        bm1 = float(np.mean(g1))
        bm2 = float(np.mean(g2))
        d1 = g1 - bm1
        d2 = g2 - bm2
        bM1 = float(np.sum(d1 * d1))
        bM2 = float(np.sum(d2 * d2))
        bC = float(np.sum(d1 * d2))
        n = n_tot + take
        delta1 = bm1 - mean1
        delta2 = bm2 - mean2
        scale = n_tot * take / n
        m2_1 += bM1 + delta1 * delta1 * scale
        m2_2 += bM2 + delta2 * delta2 * scale
        c2 += bC + delta1 * delta2 * scale
        mean1 += delta1 * (take / n)
        mean2 += delta2 * (take / n)
        n_tot = n
    if n_tot < 4 or m2_1 <= 0.0 or m2_2 <= 0.0:
        raise ValueError("correlation estimate requires at least 4 informative samples")
    rho = c2 / np.sqrt(m2_1 * m2_2)
    se = float((1.0 - rho * rho) / np.sqrt(n_tot - 3))
    return Estimate(value=float(rho), err=se, method=Method.MONTE_CARLO)
