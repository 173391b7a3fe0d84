"""Mellin-Barnes contour evaluation of Meijer G functions, univariate and
bivariate.

Conventions
-----------
A *block* with orders (m, n) and parameter vectors a (length p) and b
(length q) owns the kernel

    K(s) = prod_{j<=m} Gamma(b_j + s) * prod_{i<=n} Gamma(1 - a_i - s)
           / [ prod_{j>m} Gamma(1 - b_j - s) * prod_{i>n} Gamma(a_i + s) ]

(the first ``m`` entries of ``b`` and first ``n`` entries of ``a`` sit in the
numerator).  The univariate function is

    G(z) = (1 / 2*pi*j) * integral K(s) z**-s ds

over a vertical line Re(s) = c separating the ``b``-type poles (at
``-b_j - k``) from the ``a``-type poles (at ``1 - a_i + k``).  The bivariate
extension couples two such integrals through a third *joint* block evaluated
at the sum variable:

    G2(z1, z2) = (1 / 2*pi*j)**2 * integral integral
                 K_joint(s1 + s2) K_1(s1) K_2(s2) z1**-s1 z2**-s2 ds1 ds2.

Numerics
--------
Contours are vertical lines chosen in the pole-free strip (univariate:
midpoint of the strip; bivariate: Chebyshev center of the feasible polytope,
found by linear programming).  Integration runs in log space (sums of
``log_gamma`` values, so huge gamma magnitudes never overflow) on panels of
Gauss-Legendre nodes.  Truncation error is controlled by doubling the
half-length T of the contour until the value stops moving; discretization
error by re-evaluating with 1.5x the node density.  Both estimates are added
into the reported error.  Panel width shrinks automatically when the contour
runs close to a pole.

A :class:`ContourError` means no valid separating contour exists for the
requested parameters; :class:`TruncationError` means the integral failed to
settle within the evaluation budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import linprog
from scipy.special import loggamma as _loggamma

__all__ = [
    "GBlock",
    "MeijerGSpec",
    "BivariateGSpec",
    "ContourError",
    "TruncationError",
    "meijer_g",
    "meijer_g_with_error",
    "meijer_g_cdf_fisher",
    "bivariate_meijer_g",
    "bivariate_meijer_g_with_error",
]


class ContourError(ValueError):
    """No pole-separating contour exists for the requested parameters."""


class TruncationError(RuntimeError):
    """The contour integral did not converge within the evaluation budget."""


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------


def _validate_block(m: int, n: int, a: tuple, b: tuple) -> None:
    p, q = len(a), len(b)
    if not (0 <= n <= p):
        raise ValueError(f"need 0 <= n <= p, got n={n}, p={p}")
    if not (0 <= m <= q):
        raise ValueError(f"need 0 <= m <= q, got m={m}, q={q}")
    for v in (*a, *b):
        if not np.isfinite(v):
            raise ValueError("block parameters must be finite")


@dataclass(frozen=True)
class GBlock:
    """One kernel block: orders (m, n) over parameters a (top) and b (bottom)."""

    m: int
    n: int
    a: tuple[float, ...] = ()
    b: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        _validate_block(self.m, self.n, self.a, self.b)

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def is_empty(self) -> bool:
        return self.p == 0 and self.q == 0

    def strip(self) -> tuple[float, float]:
        """Open strip (lower, upper) of admissible Re(s) for this block."""
        lower = max((-bj for bj in self.b[: self.m]), default=-np.inf)
        upper = min((1.0 - ai for ai in self.a[: self.n]), default=np.inf)
        return lower, upper

    def log_kernel(self, s: np.ndarray) -> np.ndarray:
        """log K(s) on an array of complex points (vectorized)."""
        out = np.zeros_like(s, dtype=complex)
        for j, bj in enumerate(self.b):
            if j < self.m:
                out += _loggamma(bj + s)
            else:
                out -= _loggamma(1.0 - bj - s)
        for i, ai in enumerate(self.a):
            if i < self.n:
                out += _loggamma(1.0 - ai - s)
            else:
                out -= _loggamma(ai + s)
        return out

    def pole_distance(self, c: float) -> float:
        """Distance from the vertical line Re(s)=c to the nearest kernel pole."""
        dists = []
        for bj in self.b[: self.m]:
            # poles at -bj, -bj-1, ... ; nearest is -bj if c > -bj
            dists.append(abs(c + bj) if c > -bj else 0.0)
        for ai in self.a[: self.n]:
            dists.append(abs(1.0 - ai - c) if c < 1.0 - ai else 0.0)
        return min(dists, default=np.inf)


@dataclass(frozen=True)
class MeijerGSpec:
    """Univariate Meijer G specification: orders, parameters and argument."""

    m: int
    n: int
    p: int
    q: int
    a: tuple[float, ...]
    b: tuple[float, ...]
    z: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if self.p != len(self.a) or self.q != len(self.b):
            raise ValueError("p, q must match the parameter vector lengths")
        _validate_block(self.m, self.n, self.a, self.b)
        if self.p == 0 and self.q == 0:
            raise ValueError("kernel must contain at least one gamma factor")
        z = complex(self.z)
        if z == 0:
            raise ValueError("argument z must be nonzero")
        object.__setattr__(self, "z", z)

    @property
    def block(self) -> GBlock:
        return GBlock(self.m, self.n, self.a, self.b)


@dataclass(frozen=True)
class BivariateGSpec:
    """Bivariate Meijer G: a joint block on s1+s2 and one block per variable."""

    joint: GBlock
    block1: GBlock
    block2: GBlock
    z1: complex
    z2: complex

    def __post_init__(self) -> None:
        for name in ("z1", "z2"):
            z = complex(getattr(self, name))
            object.__setattr__(self, name, z)


# ---------------------------------------------------------------------------
# quadrature along a vertical contour
# ---------------------------------------------------------------------------

_NODES_PER_PANEL = 16
_DENSITY_FACTOR = 2  # node-count multiplier for the discretization check
_T_LEVELS = (10.0, 20.0, 40.0, 80.0)


def _panel_width(*pole_dists: float) -> float:
    """Panel width adapted to the nearest pole distance (resolution safety)."""
    d = min(pole_dists)
    if d <= 0.0:
        raise ContourError("contour touches a kernel pole")
    return float(np.clip(0.8 * d, 0.02, 0.5))


def _line_nodes(t_max: float, width: float, nodes_per_panel: int):
    """Gauss-Legendre nodes/weights tiling [-t_max, t_max] in panels."""
    n_panels = max(2, int(np.ceil(2.0 * t_max / width)))
    edges = np.linspace(-t_max, t_max, n_panels + 1)
    x, w = leggauss(nodes_per_panel)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    ts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return ts, ws


def _univariate_sum(
    block: GBlock, logz: complex, c: float, t_max: float, width: float, npp: int
) -> tuple[complex, int]:
    ts, ws = _line_nodes(t_max, width, npp)
    s = c + 1j * ts
    logv = block.log_kernel(s) - s * logz
    vals = np.exp(logv)
    return complex(np.sum(ws * vals)) / (2.0 * np.pi), ts.size


def _converge_on_levels(eval_at, tol: float, what: str):
    """Run eval_at(t_max, density_factor) across T levels; return diagnostics.

    eval_at returns (value, n_evals).  Convergence means the value moved less
    than tol*max(1, |value|) under the last T doubling.  The discretization
    check then re-runs the *previous* level (whose tail contribution is
    already bounded by the truncation estimate) at doubled node density, and
    the measured density correction is applied to the final value.
    """
    evals = 0
    prev = None
    prev_t = None
    err_trunc = np.inf
    for t_max in _T_LEVELS:
        value, n = eval_at(t_max, 1)
        evals += n
        if prev is not None:
            err_trunc = abs(value - prev)
            if err_trunc <= tol * max(1.0, abs(value)):
                dense, n = eval_at(prev_t, _DENSITY_FACTOR)
                evals += n
                err_disc = abs(dense - prev)
                return value + (dense - prev), err_trunc + err_disc, evals
        prev, prev_t = value, t_max
    raise TruncationError(
        f"{what}: contour tails still moving at T={_T_LEVELS[-1]} "
        f"(last change {err_trunc:.3e})"
    )


def _eval_univariate(
    block: GBlock, z: complex, tol: float, contour: float | None
) -> tuple[complex, float, int]:
    lower, upper = block.strip()
    if lower >= upper:
        raise ContourError(
            f"empty pole-separating strip ({lower}, {upper}) for parameters "
            f"a={block.a}, b={block.b}"
        )
    if contour is None:
        if np.isfinite(lower) and np.isfinite(upper):
            c = 0.5 * (lower + upper)
        elif np.isfinite(lower):
            c = lower + 0.5
        elif np.isfinite(upper):
            c = upper - 0.5
        else:
            c = 0.0
    else:
        c = float(contour)
        if not (lower < c < upper):
            raise ContourError(f"requested contour {c} outside strip ({lower}, {upper})")
    width = _panel_width(block.pole_distance(c))
    logz = np.log(complex(z))

    def eval_at(t_max: float, density: int):
        return _univariate_sum(block, logz, c, t_max, width / density, _NODES_PER_PANEL)

    return _converge_on_levels(eval_at, tol, "meijer_g")


def meijer_g_with_error(
    spec: MeijerGSpec, tol: float = 1e-10, contour: float | None = None
) -> tuple[complex, float, int]:
    """Evaluate a univariate G function, returning (value, err, evaluations)."""
    return _eval_univariate(spec.block, spec.z, tol, contour)


def meijer_g(spec: MeijerGSpec, tol: float = 1e-10, contour: float | None = None) -> complex:
    """Evaluate a univariate Meijer G function by Mellin-Barnes quadrature."""
    value, _, _ = meijer_g_with_error(spec, tol, contour)
    return value


def meijer_g_cdf_fisher(params, snr: float, tol: float = 1e-10) -> float:
    """SNR distribution of a Fisher-Snedecor F link in Meijer G form.

    Evaluates ``F(snr) = G^{1,2}_{2,2}(lam*snr | (1-m_s, 1); (m, 0)) /
    (Gamma(m) * Gamma(m_s))`` through the contour engine.  This is the
    independent dual route to the regularized-beta CDF and exists to
    cross-check the engine; production code should prefer ``fading.cdf``.
    """
    snr = float(snr)
    if snr <= 0.0:
        return 0.0
    spec = MeijerGSpec(
        m=1,
        n=2,
        p=2,
        q=2,
        a=(1.0 - params.m_s, 1.0),
        b=(params.m, 0.0),
        z=params.lam * snr,
    )
    log_b = -(_loggamma(params.m) + _loggamma(params.m_s))
    value, _, _ = meijer_g_with_error(spec, tol)
    return float(np.exp(log_b).real * value.real)


# ---------------------------------------------------------------------------
# bivariate evaluation
# ---------------------------------------------------------------------------


def _merge_blocks(first: GBlock, second: GBlock) -> GBlock:
    """Kernel product of two blocks over the same variable as a single block."""
    a = first.a[: first.n] + second.a[: second.n] + first.a[first.n :] + second.a[second.n :]
    b = first.b[: first.m] + second.b[: second.m] + first.b[first.m :] + second.b[second.m :]
    return GBlock(m=first.m + second.m, n=first.n + second.n, a=a, b=b)


def _chebyshev_contours(spec: BivariateGSpec) -> tuple[float, float]:
    """Pick (c1, c2) as the Chebyshev center of the admissible polytope.

    Constraints: c1 in the block-1 strip, c2 in the block-2 strip, and
    c1 + c2 in the joint-block strip.  The center maximizes the minimum
    margin to any strip face, i.e. keeps the contour as far from every pole
    line as possible.
    """
    rows = []  # (coef1, coef2, bound) encoding coef . c <= bound
    l1, u1 = spec.block1.strip()
    l2, u2 = spec.block2.strip()
    l0, u0 = spec.joint.strip()
    for lo, hi, coef in ((l1, u1, (1.0, 0.0)), (l2, u2, (0.0, 1.0)), (l0, u0, (1.0, 1.0))):
        if lo >= hi:
            raise ContourError(f"empty admissible strip ({lo}, {hi}) in bivariate kernel")
        if np.isfinite(hi):
            rows.append((coef[0], coef[1], hi))
        if np.isfinite(lo):
            rows.append((-coef[0], -coef[1], -lo))
    if not rows:
        return 0.0, 0.0
    a_ub = [[r[0], r[1], float(np.hypot(r[0], r[1]))] for r in rows]
    b_ub = [r[2] for r in rows]
    # cap the margin so the LP stays bounded when strips are half-infinite
    a_ub.append([0.0, 0.0, 1.0])
    b_ub.append(5.0)
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(-100.0, 100.0), (-100.0, 100.0), (0.0, None)],
        method="highs",
    )
    if not res.success or res.x[2] <= 0.0:
        raise ContourError(
            "no contour pair separates the pole sets of the bivariate kernel"
        )
    margin = float(res.x[2])
    # When a strip is half-infinite the max-margin solution is degenerate
    # (any sufficiently large |c| attains it) and the solver may park c at
    # the variable bounds, where z**-s overflows.  A second stage picks the
    # minimum-L1 point among the optimal-margin solutions; for bounded
    # strips the center is already unique and this is a no-op.
    a2 = [[r[0], r[1], 0.0, 0.0] for r in a_ub[:-1]]
    b2 = [b - margin * np.hypot(a[0], a[1]) for a, b in zip(a_ub[:-1], b_ub[:-1])]
    for i in range(2):
        for sign in (1.0, -1.0):
            row = [0.0, 0.0, 0.0, 0.0]
            row[i] = sign
            row[2 + i] = -1.0
            a2.append(row)
            b2.append(0.0)
    res2 = linprog(
        c=[0.0, 0.0, 1.0, 1.0],
        A_ub=a2,
        b_ub=b2,
        bounds=[(-100.0, 100.0), (-100.0, 100.0), (0.0, None), (0.0, None)],
        method="highs",
    )
    if res2.success:
        return float(res2.x[0]), float(res2.x[1])
    return float(res.x[0]), float(res.x[1])


_MAX_GRID_ENTRIES = 200_000_000
_CHUNK_ROWS = 256


def _bivariate_sum(
    spec: BivariateGSpec,
    c1: float,
    c2: float,
    w1: float,
    w2: float,
    t_max: float,
    npp: int,
) -> tuple[complex, int]:
    t1, wt1 = _line_nodes(t_max, w1, npp)
    t2, wt2 = _line_nodes(t_max, w2, npp)
    if t1.size * t2.size > _MAX_GRID_ENTRIES:
        raise TruncationError(
            f"bivariate contour grid of {t1.size} x {t2.size} nodes exceeds the "
            "evaluation budget"
        )
    s1 = c1 + 1j * t1
    s2 = c2 + 1j * t2
    log1 = spec.block1.log_kernel(s1) - s1 * np.log(complex(spec.z1))
    log2 = spec.block2.log_kernel(s2) - s2 * np.log(complex(spec.z2))
    # (1/2*pi*j)**2 * (i dt1)(i dt2) = + dt1 dt2 / (4 pi^2).  Row-chunked so
    # the (n1, n2) kernel matrix never materializes whole.
    acc = np.zeros(t2.size, dtype=complex)
    for start in range(0, t1.size, _CHUNK_ROWS):
        sl = slice(start, start + _CHUNK_ROWS)
        s_sum = s1[sl, None] + s2[None, :]
        logv = spec.joint.log_kernel(s_sum) + log1[sl, None] + log2[None, :]
        acc += wt1[sl] @ np.exp(logv)
    total = complex(acc @ wt2) / (4.0 * np.pi**2)
    return total, t1.size * t2.size


def bivariate_meijer_g_with_error(
    spec: BivariateGSpec,
    tol: float = 1e-8,
    contours: tuple[float, float] | None = None,
) -> tuple[complex, float, int]:
    """Evaluate a bivariate G function, returning (value, err, evaluations)."""
    if spec.block2.is_empty and spec.joint.is_empty and spec.block1.is_empty:
        raise ContourError("bivariate kernel has no gamma factors")
    if spec.block2.is_empty:
        merged = _merge_blocks(spec.joint, spec.block1)
        return _eval_univariate(merged, spec.z1, tol, None)
    if spec.block1.is_empty:
        merged = _merge_blocks(spec.joint, spec.block2)
        return _eval_univariate(merged, spec.z2, tol, None)
    if complex(spec.z1) == 0 or complex(spec.z2) == 0:
        raise ValueError("arguments z1, z2 must be nonzero")

    if contours is None:
        c1, c2 = _chebyshev_contours(spec)
    else:
        c1, c2 = float(contours[0]), float(contours[1])
        for c, blk, label in ((c1, spec.block1, "c1"), (c2, spec.block2, "c2")):
            lo, hi = blk.strip()
            if not (lo < c < hi):
                raise ContourError(f"{label}={c} outside admissible strip ({lo}, {hi})")
        lo, hi = spec.joint.strip()
        if not (lo < c1 + c2 < hi):
            raise ContourError(f"c1+c2={c1 + c2} outside joint strip ({lo}, {hi})")

    d1 = min(spec.block1.pole_distance(c1), spec.joint.pole_distance(c1 + c2))
    d2 = min(spec.block2.pole_distance(c2), spec.joint.pole_distance(c1 + c2))
    w1 = _panel_width(d1)
    w2 = _panel_width(d2)

    def eval_at(t_max: float, density: int):
        return _bivariate_sum(spec, c1, c2, w1 / density, w2 / density, t_max, _NODES_PER_PANEL)

    return _converge_on_levels(eval_at, tol, "bivariate_meijer_g")


def bivariate_meijer_g(
    spec: BivariateGSpec,
    tol: float = 1e-8,
    contours: tuple[float, float] | None = None,
) -> complex:
    """Evaluate a bivariate Meijer G function by double Mellin-Barnes quadrature."""
    value, _, _ = bivariate_meijer_g_with_error(spec, tol, contours)
    return value
