"""Fisher-Snedecor F model for the instantaneous SNR of a fading link.

A link is described by a fading-severity parameter ``m`` (small = severe
multipath), a shadowing parameter ``m_s`` (small = heavy shadowing), and the
mean SNR ``mean_snr`` (linear scale).  Writing ``lam = m / (m_s * mean_snr)``,
the SNR density and distribution are

    pdf(g) = lam**m * g**(m-1) * (1 + lam*g)**-(m + m_s) / B(m, m_s)
    cdf(g) = I_x(m, m_s),   x = m*g / (m*g + m_s*mean_snr)

i.e. ``lam * g`` follows a beta-prime(m, m_s) law.  All four operations are
vectorized over the SNR / probability argument and return scalars for scalar
input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .specfun import generalized_beta_inverse_upper_grid

__all__ = ["FadingParams", "cdf", "pdf", "quantile", "tau_transform"]


@dataclass(frozen=True)
class FadingParams:
    """Marginal SNR model of one link: shape (m, m_s) and mean SNR (linear)."""

    m: float
    m_s: float
    mean_snr: float

    def __post_init__(self) -> None:
        for name in ("m", "m_s", "mean_snr"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"FadingParams.{name} must be finite and positive, got {v}")
            object.__setattr__(self, name, v)

    @property
    def lam(self) -> float:
        """Rate constant ``m / (m_s * mean_snr)`` of the beta-prime scaling."""
        return self.m / (self.m_s * self.mean_snr)


def _maybe_scalar(out: np.ndarray, scalar_in: bool):
    return float(out[0]) if scalar_in else out


def cdf(params: FadingParams, snr):
    """P(SNR <= snr); identically 0 for snr <= 0."""
    g = np.asarray(snr, dtype=float)
    scalar_in = g.ndim == 0
    g = np.atleast_1d(g)
    out = np.zeros_like(g)
    pos = (g > 0.0) & np.isfinite(g)
    if np.any(pos):
        gp = g[pos]
        x = params.m * gp / (params.m * gp + params.m_s * params.mean_snr)
        out[pos] = _sp.betainc(params.m, params.m_s, x)
    out = np.where(np.isposinf(g), 1.0, out)
    return _maybe_scalar(out, scalar_in)


def pdf(params: FadingParams, snr):
    """Density of the SNR; 0 for snr < 0, evaluated in log space for stability."""
    g = np.asarray(snr, dtype=float)
    scalar_in = g.ndim == 0
    g = np.atleast_1d(g)
    m, ms, lam = params.m, params.m_s, params.lam
    out = np.zeros_like(g)
    pos = (g > 0.0) & np.isfinite(g)
    if np.any(pos):
        gp = g[pos]
        log_pdf = (
            m * np.log(lam)
            + (m - 1.0) * np.log(gp)
            - (m + ms) * np.log1p(lam * gp)
            - _sp.betaln(m, ms)
        )
        out[pos] = np.exp(log_pdf)
    at_zero = g == 0.0
    if np.any(at_zero):
        if m > 1.0:
            limit = 0.0
        elif m == 1.0:
            limit = lam * ms  # (1+lam*g)**-(1+ms)/B(1,ms) at g=0, B(1,ms)=1/ms
        else:
            limit = np.inf
        out[at_zero] = limit
    return _maybe_scalar(out, scalar_in)


def quantile(params: FadingParams, u):
    """Inverse CDF.  ``u=0`` maps to 0 and ``u=1`` to ``inf`` (sentinel).

    Solved through the *upper* beta anchoring: with ``x`` satisfying
    ``I_x(m_s, m) = 1 - u`` the quantile is ``(m_s*mean_snr/m) * (1/x - 1)``,
    which keeps relative precision in the heavy upper tail (u near 1) where
    the direct anchoring would cancel.
    """
    uu = np.asarray(u, dtype=float)
    scalar_in = uu.ndim == 0
    uu = np.atleast_1d(uu)
    if np.any((uu < 0.0) | (uu > 1.0)):
        raise ValueError("quantile argument must lie in [0, 1]")
    x = generalized_beta_inverse_upper_grid(params.m_s, params.m, uu)
    scale = params.m_s * params.mean_snr / params.m
    with np.errstate(divide="ignore"):
        out = scale * (1.0 / x - 1.0)
    out = np.where(uu == 0.0, 0.0, out)
    out = np.where(uu == 1.0, np.inf, out)
    return _maybe_scalar(out, scalar_in)


def tau_transform(params1: FadingParams, params2: FadingParams, threshold: float, u1):
    """Grade of link 2 at the residual threshold left by link 1.

    For a sum-rate constraint ``g1 + g2 <= threshold`` this is
    ``F2(threshold - Q1(u1))``: feed in the link-1 grade ``u1``, map it to an
    SNR through the link-1 quantile, and evaluate the link-2 CDF on what
    remains of the threshold.  Zero whenever link 1 alone exhausts the
    threshold (including ``u1 = 1``).
    """
    threshold = float(threshold)
    uu = np.asarray(u1, dtype=float)
    scalar_in = uu.ndim == 0
    uu = np.atleast_1d(uu)
    g1 = np.atleast_1d(np.asarray(quantile(params1, uu), dtype=float))
    residual = threshold - g1
    residual = np.where(np.isneginf(residual), -1.0, residual)  # F2 of negative is 0
    out = np.atleast_1d(np.asarray(cdf(params2, residual), dtype=float))
    return _maybe_scalar(out, scalar_in)
