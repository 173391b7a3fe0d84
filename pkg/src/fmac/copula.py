"""Dependence structure between the two links: independent or Clayton.

The Clayton family with parameter ``theta > 0`` is

    C(u1, u2) = (u1**-theta + u2**-theta - 1) ** (-1/theta)

with conditional (partial derivative in the first grade)

    dC/du1 = u1**(-theta-1) * (u1**-theta + u2**-theta - 1) ** (-1/theta - 1)

and density

    c(u1, u2) = (1+theta) * (u1*u2)**(-1-theta)
                * (u1**-theta + u2**-theta - 1) ** (-2 - 1/theta).

Large ``theta`` drives ``u**-theta`` far beyond the double range, so every
formula is evaluated in log space: with ``a_i = -theta * log(u_i) >= 0`` the
pivot quantity is ``log S`` where ``S = exp(a1) + exp(a2) - 1 >= 1``, computed
as ``log1p(expm1(a1) + expm1(a2))`` while that is representable and by a
shifted log-sum-exp otherwise.  Sampling uses conditional inversion: with
``w`` uniform, ``u2 = (1 + u1**-theta * (w**(-theta/(1+theta)) - 1))**(-1/theta)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DependenceModel",
    "cdf",
    "partial_u1",
    "density",
    "sample_pair",
    "sample_pairs",
]

KIND_INDEPENDENT = "independent"
KIND_CLAYTON = "clayton"

# Above this exponent, expm1(a) would overflow-dominate; switch to the
# shifted log-sum-exp form of log S.
_LOG_SPACE_SWITCH = 30.0


@dataclass(frozen=True)
class DependenceModel:
    """Copula family tag plus its parameter (``theta`` only for Clayton)."""

    kind: str
    theta: float | None = None

    def __post_init__(self) -> None:
        if self.kind == KIND_INDEPENDENT:
            if self.theta is not None:
                raise ValueError("independent model takes no theta")
        elif self.kind == KIND_CLAYTON:
            if self.theta is None or not np.isfinite(self.theta) or self.theta <= 0.0:
                raise ValueError(
                    f"clayton model requires finite theta > 0, got {self.theta}"
                )
            object.__setattr__(self, "theta", float(self.theta))
        else:
            raise ValueError(f"unknown dependence kind {self.kind!r}")

    @classmethod
    def independent(cls) -> "DependenceModel":
        return cls(KIND_INDEPENDENT)

    @classmethod
    def clayton(cls, theta: float) -> "DependenceModel":
        return cls(KIND_CLAYTON, theta)


def _as_grades(u, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr, scalar


def _log_s(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """log(exp(a1) + exp(a2) - 1) for a1, a2 >= 0, overflow-safe."""
    big = np.maximum(a1, a2)
    small_branch = big <= _LOG_SPACE_SWITCH
    out = np.empty_like(big)
    if np.any(small_branch):
        s1 = np.expm1(a1[small_branch]) + np.expm1(a2[small_branch])
        out[small_branch] = np.log1p(s1)
    huge = ~small_branch
    if np.any(huge):
        gap = np.abs(a1[huge] - a2[huge])
        out[huge] = big[huge] + np.log1p(np.exp(-gap) - np.exp(-big[huge]))
    return out


def _ret(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def cdf(model: DependenceModel, u1, u2):
    """Joint grade distribution C(u1, u2)."""
    a1, s1 = _as_grades(u1, "u1")
    a2, s2 = _as_grades(u2, "u2")
    scalar = s1 and s2
    a1, a2 = np.broadcast_arrays(a1, a2)
    if model.kind == KIND_INDEPENDENT:
        return _ret(a1 * a2, scalar)
    theta = model.theta
    out = np.zeros(a1.shape, dtype=float)
    pos = (a1 > 0.0) & (a2 > 0.0)
    if np.any(pos):
        with np.errstate(divide="ignore"):
            e1 = -theta * np.log(a1[pos])
            e2 = -theta * np.log(a2[pos])
        out[pos] = np.exp(-_log_s(e1, e2) / theta)
    return _ret(out, scalar)


def partial_u1(model: DependenceModel, u1, u2):
    """Conditional distribution of the second grade given the first,
    dC/du1 = P(U2 <= u2 | U1 = u1).  The u1 -> 0 limit is 1 for u2 > 0."""
    a1, s1 = _as_grades(u1, "u1")
    a2, s2 = _as_grades(u2, "u2")
    scalar = s1 and s2
    a1, a2 = np.broadcast_arrays(a1, a2)
    if model.kind == KIND_INDEPENDENT:
        return _ret(a2.copy(), scalar)
    theta = model.theta
    out = np.zeros(a1.shape, dtype=float)
    # u2 == 0 gives 0; u1 == 0 (with u2 > 0) has limit 1.
    lim_one = (a1 == 0.0) & (a2 > 0.0)
    out[lim_one] = 1.0
    pos = (a1 > 0.0) & (a2 > 0.0)
    if np.any(pos):
        lu1 = np.log(a1[pos])
        e1 = -theta * lu1
        e2 = -theta * np.log(a2[pos])
        log_s = _log_s(e1, e2)
        out[pos] = np.exp(-(1.0 + theta) * lu1 - (1.0 + 1.0 / theta) * log_s)
    return _ret(out, scalar)


def density(model: DependenceModel, u1, u2):
    """Copula density c(u1, u2).

    Defined on the open unit square; on the boundary the continuous limit is
    returned where one exists (0 along the ``u = 0`` edges for Clayton, the
    formula value along ``u = 1``), so quadrature abscissae that round onto
    the boundary stay harmless.
    """
    a1, s1 = _as_grades(u1, "u1")
    a2, s2 = _as_grades(u2, "u2")
    scalar = s1 and s2
    a1, a2 = np.broadcast_arrays(a1, a2)
    if model.kind == KIND_INDEPENDENT:
        return _ret(np.ones(a1.shape, dtype=float), scalar)
    theta = model.theta
    out = np.zeros(a1.shape, dtype=float)
    pos = (a1 > 0.0) & (a2 > 0.0)
    if np.any(pos):
        lu1 = np.log(a1[pos])
        lu2 = np.log(a2[pos])
        log_s = _log_s(-theta * lu1, -theta * lu2)
        log_c = (
            np.log1p(theta)
            - (1.0 + theta) * (lu1 + lu2)
            - (2.0 + 1.0 / theta) * log_s
        )
        out[pos] = np.exp(log_c)
    return _ret(out, scalar)


def sample_pairs(model: DependenceModel, rng: np.random.Generator, n: int):
    """Draw ``n`` grade pairs (u1, u2) from the copula as two float arrays.

    Conditional inversion keeps a one-to-one, order-preserving map from the
    underlying uniform stream to the output, so results are reproducible for
    a fixed generator state regardless of batching.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    u1 = rng.random(n)
    w = rng.random(n)
    if model.kind == KIND_INDEPENDENT:
        return u1, w
    theta = model.theta
    with np.errstate(divide="ignore", over="ignore"):
        a1 = -theta * np.log(u1)  # +inf at u1 == 0
        t = -(theta / (1.0 + theta)) * np.log(w)  # +inf at w == 0
        # log(exp(a1) * expm1(t)):
        log_growth = a1 + np.log(np.expm1(t))
    # u2 = (1 + exp(log_growth)) ** (-1/theta), in log space throughout.
    log_inner = np.logaddexp(0.0, log_growth)
    u2 = np.exp(-log_inner / theta)
    # Degenerate draws: w == 1 gives u2 = 1 exactly; u1 == 0 or w == 0 give 0.
    u2 = np.where(w == 1.0, 1.0, u2)
    u2 = np.where((u1 == 0.0) | (w == 0.0), 0.0, u2)
    return u1, u2


def sample_pair(model: DependenceModel, rng: np.random.Generator) -> tuple[float, float]:
    """Draw a single grade pair (u1, u2)."""
    u1, u2 = sample_pairs(model, rng, 1)
    return float(u1[0]), float(u2[0])
