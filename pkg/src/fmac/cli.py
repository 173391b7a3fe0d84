"""Command line interface.

Subcommands
-----------
``op``        sweep outage probability over mean SNR
``ac``        sweep average capacity over mean SNR
``corr``      tabulate the SNR correlation coefficient per (shape, theta)
``scatter``   emit raw SNR sample pairs for visual inspection
``validate``  run the built-in numerical cross-check suite

Output is a delimited stream (CSV by default, JSON lines with
``--format json``) written to stdout or ``--output``; sweeps can
additionally render a figure next to the data with ``--plot FILE.png``.
CSV payloads start with a ``# schema_version=1`` comment followed by the
column header.

Exit codes: 0 success, 2 usage error, 3 numerical failure (a row carries a
non-``ok`` status, or a validation check fails).

Determinism: for a fixed seed the emitted bytes are identical across runs
and across ``--workers`` settings; every grid point draws from its own
counter-based substream, so parallel scheduling cannot reorder randomness.
The seed comes from ``--seed``, else the ``FMAC_SEED`` environment
variable, else a fixed default.  ``--config FILE`` supplies ``key = value``
defaults for any long option (command line wins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import copula, fading, mcsim, metrics, quad, specfun
from .copula import DependenceModel
from .fading import FadingParams
from .metrics import Estimate, MacScenario, Method, Scenario, SeriesDivergenceError

SCHEMA_VERSION = 1
ENV_SEED = "FMAC_SEED"
SWEEP_COLUMNS = ("snr_db", "method", "value", "err", "status")
CORR_COLUMNS = ("m1", "ms1", "m2", "ms2", "theta", "rho", "se", "n")
SCATTER_COLUMNS = ("theta", "gamma1", "gamma2")

_METHOD_ALIASES = {
    "closed": Method.CLOSED_FORM,
    "closed_form": Method.CLOSED_FORM,
    "quad": Method.QUADRATURE,
    "quadrature": Method.QUADRATURE,
    "series": Method.SERIES,
    "mc": Method.MONTE_CARLO,
    "monte_carlo": Method.MONTE_CARLO,
}

_AVAILABLE_METHODS = {
    ("op", Scenario.CLEAN, copula.KIND_INDEPENDENT): (
        Method.CLOSED_FORM,
        Method.QUADRATURE,
        Method.MONTE_CARLO,
    ),
    ("op", Scenario.CLEAN, copula.KIND_CLAYTON): (Method.QUADRATURE, Method.MONTE_CARLO),
    ("op", Scenario.DOUBLY_DIRTY, copula.KIND_INDEPENDENT): (
        Method.CLOSED_FORM,
        Method.QUADRATURE,
        Method.MONTE_CARLO,
    ),
    ("op", Scenario.DOUBLY_DIRTY, copula.KIND_CLAYTON): (
        Method.CLOSED_FORM,
        Method.QUADRATURE,
        Method.MONTE_CARLO,
    ),
    ("ac", Scenario.CLEAN, copula.KIND_INDEPENDENT): (
        Method.QUADRATURE,
        Method.SERIES,
        Method.MONTE_CARLO,
    ),
    ("ac", Scenario.CLEAN, copula.KIND_CLAYTON): (Method.QUADRATURE, Method.MONTE_CARLO),
    ("ac", Scenario.DOUBLY_DIRTY, copula.KIND_INDEPENDENT): (
        Method.CLOSED_FORM,
        Method.QUADRATURE,
        Method.MONTE_CARLO,
    ),
    ("ac", Scenario.DOUBLY_DIRTY, copula.KIND_CLAYTON): (
        Method.QUADRATURE,
        Method.MONTE_CARLO,
    ),
}

_METRIC_FUNCTIONS = {
    ("op", Scenario.CLEAN, copula.KIND_INDEPENDENT): metrics.op_clean_independent,
    ("op", Scenario.CLEAN, copula.KIND_CLAYTON): metrics.op_clean_correlated,
    ("op", Scenario.DOUBLY_DIRTY, copula.KIND_INDEPENDENT): metrics.op_dirty_independent,
    ("op", Scenario.DOUBLY_DIRTY, copula.KIND_CLAYTON): metrics.op_dirty_correlated,
    ("ac", Scenario.CLEAN, copula.KIND_INDEPENDENT): metrics.ac_clean_independent,
    ("ac", Scenario.CLEAN, copula.KIND_CLAYTON): metrics.ac_clean_correlated,
    ("ac", Scenario.DOUBLY_DIRTY, copula.KIND_INDEPENDENT): metrics.ac_dirty_independent,
    ("ac", Scenario.DOUBLY_DIRTY, copula.KIND_CLAYTON): metrics.ac_dirty_correlated,
}

# Table-style default grid for the corr subcommand: (m1, ms1, m2, ms2) rows
# covering identically-shaped links plus mixed-severity pairings.
DEFAULT_CORR_SHAPES = (
    (2, 2, 2, 2),
    (5, 5, 5, 5),
    (7, 7, 7, 7),
    (2, 3, 2, 3),
    (2, 5, 2, 5),
    (2, 20, 2, 20),
    (3, 3, 3, 3),
    (5, 3, 5, 3),
    (7, 3, 7, 3),
    (3, 5, 3, 5),
    (5, 15, 5, 15),
    (7, 30, 7, 30),
    (2, 3, 3, 5),
    (3, 5, 5, 15),
    (5, 15, 7, 30),
)
DEFAULT_CORR_THETAS = (10.0, 25.0, 40.0)


@dataclass(frozen=True)
class SweepSpec:
    """Fully-resolved description of one op/ac sweep."""

    quantity: str  # "op" | "ac"
    scenario: Scenario
    dependence: DependenceModel
    m1: float
    ms1: float
    m2: float
    ms2: float
    snr_start_db: float
    snr_stop_db: float
    snr_step_db: float
    link2_mode: str = "equal"  # equal | fixed | offset
    link2_value_db: float = 0.0
    rate_threshold: float | None = None
    methods: tuple[Method, ...] = ()
    mc_samples: int = 10**6
    mc_batch: int = 1 << 20
    seed: int = metrics.DEFAULT_SEED
    workers: int = 1
    normalize_awgn: bool = False

    def __post_init__(self) -> None:
        if self.snr_step_db <= 0.0:
            raise ValueError("snr step must be positive")
        if self.snr_stop_db < self.snr_start_db:
            raise ValueError("snr stop must not precede start")
        for name in ("m1", "ms1", "m2", "ms2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def grid_db(self) -> tuple[float, ...]:
        n = int(round((self.snr_stop_db - self.snr_start_db) / self.snr_step_db))
        pts = [self.snr_start_db + k * self.snr_step_db for k in range(n + 1)]
        if pts[-1] < self.snr_stop_db - 1e-9:
            pts.append(self.snr_stop_db)
        return tuple(pts)

    def scenario_at(self, snr_db: float) -> MacScenario:
        mean1 = 10.0 ** (snr_db / 10.0)
        if self.link2_mode == "equal":
            snr2_db = snr_db
        elif self.link2_mode == "fixed":
            snr2_db = self.link2_value_db
        elif self.link2_mode == "offset":
            snr2_db = snr_db + self.link2_value_db
        else:
            raise ValueError(f"unknown link2 mode {self.link2_mode!r}")
        mean2 = 10.0 ** (snr2_db / 10.0)
        return MacScenario(
            scenario=self.scenario,
            link1=FadingParams(self.m1, self.ms1, mean1),
            link2=FadingParams(self.m2, self.ms2, mean2),
            dependence=self.dependence,
            rate_threshold=self.rate_threshold,
        )


def _fmt(x: float) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _sweep_point(args: tuple) -> dict:
    """Evaluate one (grid point, method) cell; runs in worker processes."""
    spec, index, snr_db, method = args
    scenario = spec.scenario_at(snr_db)
    fn = _METRIC_FUNCTIONS[(spec.quantity, spec.scenario, spec.dependence.kind)]
    mc_cfg = mcsim.McConfig(n_samples=spec.mc_samples, seed=spec.seed, batch=spec.mc_batch)
    try:
        est: Estimate = fn(scenario, method, mc=mc_cfg, stream=index)
        value, err = est.value, est.err
        status = "ok" if est.converged else "no_converge"
    except SeriesDivergenceError as exc:
        value, err, status = float("nan"), float("nan"), f"error:{type(exc).__name__}"
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        value, err, status = float("nan"), float("nan"), f"error:{type(exc).__name__}"
    if spec.normalize_awgn and status == "ok":
        ref = metrics.awgn_reference_capacity(scenario)
        if ref > 0.0:
            value, err = value / ref, err / ref
    return {
        "snr_db": snr_db,
        "method": method.value,
        "value": value,
        "err": err,
        "status": status,
    }


def _run_sweep(spec: SweepSpec) -> list[dict]:
    tasks = []
    for index, snr_db in enumerate(spec.grid_db()):
        for method in spec.methods:
            tasks.append((spec, index, snr_db, method))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    return rows


def run_op_sweep(spec: SweepSpec) -> list[dict]:
    """Outage-probability sweep rows in deterministic grid order."""
    if spec.quantity != "op":
        raise ValueError("run_op_sweep requires an op spec")
    if spec.rate_threshold is None:
        raise ValueError("op sweep requires a rate threshold")
    return _run_sweep(spec)


def run_ac_sweep(spec: SweepSpec) -> list[dict]:
    """Average-capacity sweep rows in deterministic grid order."""
    if spec.quantity != "ac":
        raise ValueError("run_ac_sweep requires an ac spec")
    return _run_sweep(spec)


def run_corr_table(
    shapes: tuple[tuple[float, float, float, float], ...],
    thetas: tuple[float, ...],
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> list[dict]:
    """Correlation-coefficient table rows, one per (shape row, theta)."""
    tasks = []
    stream = 0
    for shape in shapes:
        for theta in thetas:
            tasks.append((shape, theta, n_samples, seed, stream))
            stream += 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_corr_point, tasks))
    else:
        rows = [_corr_point(t) for t in tasks]
    return rows


def _corr_point(args: tuple) -> dict:
    (m1, ms1, m2, ms2), theta, n_samples, seed, stream = args
    # rho is invariant to the SNR scale, so the mean SNRs are pinned to 1.
    link1 = FadingParams(m1, ms1, 1.0)
    link2 = FadingParams(m2, ms2, 1.0)
    model = (
        DependenceModel.independent() if theta == 0.0 else DependenceModel.clayton(theta)
    )
    est = metrics.correlation_coefficient(
        link1, link2, model, mcsim.McConfig(n_samples=n_samples, seed=seed), stream=stream
    )
    return {
        "m1": m1,
        "ms1": ms1,
        "m2": m2,
        "ms2": ms2,
        "theta": theta,
        "rho": est.value,
        "se": est.err,
        "n": n_samples,
    }


def run_scatter(
    m1: float,
    ms1: float,
    m2: float,
    ms2: float,
    snr_db: float,
    thetas: tuple[float, ...],
    n: int,
    seed: int,
) -> list[dict]:
    """Raw SNR pairs per theta (theta 0 denotes independence)."""
    mean = 10.0 ** (snr_db / 10.0)
    link1 = FadingParams(m1, ms1, mean)
    link2 = FadingParams(m2, ms2, mean)
    rows = []
    for stream, theta in enumerate(thetas):
        model = (
            DependenceModel.independent()
            if theta == 0.0
            else DependenceModel.clayton(theta)
        )
        rng = mcsim.generator(seed, stream)
        g1, g2 = mcsim.sample_snr_pairs(link1, link2, model, rng, n)
        for i in range(n):
            rows.append({"theta": theta, "gamma1": float(g1[i]), "gamma2": float(g2[i])})
    return rows


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def run_validate(seed: int) -> dict:
    """Numerical cross-check suite; returns a JSON-serializable report."""
    checks: list[dict] = []

    def check(name: str, passed: bool, detail: str) -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    from .meijer import MeijerGSpec, meijer_g, meijer_g_cdf_fisher

    # contour engine against elementary identities
    v = meijer_g(MeijerGSpec(1, 0, 0, 1, (), (0.0,), 2.0))
    check("meijer_exp_identity", abs(v - np.exp(-2.0)) < 1e-9, f"|delta|={abs(v - np.exp(-2.0)):.3e}")
    v = meijer_g(MeijerGSpec(1, 2, 2, 2, (1.0, 1.0), (1.0, 0.0), 10.0))
    check("meijer_log_identity", abs(v - np.log(11.0)) < 1e-9, f"|delta|={abs(v - np.log(11.0)):.3e}")
    from scipy.special import gamma as _gamma

    ref = _gamma(1.9) * 0.7**1.2 * 1.7 ** (0.3 - 1.2 - 1.0)
    v = meijer_g(MeijerGSpec(1, 1, 1, 1, (0.3,), (1.2,), 0.7))
    check("meijer_power_identity", abs(v - ref) < 1e-9, f"|delta|={abs(v - ref):.3e}")

    # beta inverses round-trip
    x = 0.37
    p = specfun.beta_regularized(2.0, 3.0, x)
    x_back = specfun.beta_regularized_inverse(2.0, 3.0, p)
    check("beta_round_trip", abs(x - x_back) < 1e-9, f"|delta|={abs(x - x_back):.3e}")

    # Mellin moment of the SNR density: quadrature vs gamma-function ratio
    link = FadingParams(2.0, 3.0, 10.0)
    s0 = 1.3
    from scipy.special import betaln

    analytic = float(
        link.lam ** (1.0 - s0)
        * np.exp(betaln(link.m + s0 - 1.0, link.m_s - s0 + 1.0) - betaln(link.m, link.m_s))
    )
    r = quad.integrate_semi_infinite(
        lambda g: g ** (s0 - 1.0) * fading.pdf(link, g), 0.0, 1e-10, vectorized=True
    )
    check(
        "density_mellin_moment",
        abs(r.value - analytic) < 1e-6 * analytic,
        f"quad={r.value:.9g} analytic={analytic:.9g}",
    )

    # SNR CDF: regularized beta against the contour route
    worst = 0.0
    for g in (0.5, 5.0, 31.0):
        worst = max(worst, abs(fading.cdf(link, g) - meijer_g_cdf_fisher(link, g)))
    check("cdf_dual_route", worst < 1e-9, f"max|delta|={worst:.3e}")

    # copula identities and sampler law
    model = DependenceModel.clayton(10.0)
    worst = max(
        abs(copula.cdf(model, u, 1.0) - u) + abs(copula.cdf(model, 1.0, u) - u)
        for u in (0.2, 0.7)
    )
    check("copula_margins", worst < 1e-12, f"max|delta|={worst:.3e}")
    rint = quad.integrate_finite(
        lambda us: copula.partial_u1(model, us, 0.37), 0.0, 1.0, 1e-10,
        singular=True, vectorized=True,
    )
    check(
        "copula_conditional_mass",
        abs(rint.value - 0.37) < 1e-8,
        f"integral={rint.value:.9g}",
    )
    rng = mcsim.generator(seed, 1000)
    u1, u2 = copula.sample_pairs(model, rng, 100_000)
    worst = max(
        abs(float(np.mean((u1 <= a) & (u2 <= b))) - copula.cdf(model, a, b))
        for a, b in ((0.3, 0.7), (0.5, 0.5), (0.8, 0.2))
    )
    check("copula_sampler_law", worst < 0.01, f"max|emp-analytic|={worst:.4f}")

    # flagship metric point: three routes against each other
    ind = DependenceModel.independent()
    s_op = MacScenario(Scenario.CLEAN, link, link, ind, rate_threshold=2.5)
    closed = metrics.op_clean_independent(s_op, Method.CLOSED_FORM)
    quadr = metrics.op_clean_independent(s_op, Method.QUADRATURE)
    check(
        "op_clean_closed_vs_quadrature",
        abs(closed.value - quadr.value) < 1e-8,
        f"closed={closed.value:.10g} quad={quadr.value:.10g}",
    )
    mc = metrics.op_clean_independent(
        s_op, Method.MONTE_CARLO, mcsim.McConfig(n_samples=200_000, seed=seed)
    )
    z = abs(mc.value - quadr.value) / max(mc.err, 1e-12)
    check("op_clean_quadrature_vs_mc", z < 4.0, f"z={z:.2f}")

    s_ac = MacScenario(Scenario.DOUBLY_DIRTY, link, link, ind)
    closed = metrics.ac_dirty_independent(s_ac, Method.CLOSED_FORM)
    quadr = metrics.ac_dirty_independent(s_ac, Method.QUADRATURE)
    check(
        "ac_dirty_closed_vs_quadrature",
        abs(closed.value - quadr.value) < 1e-6 * quadr.value,
        f"closed={closed.value:.10g} quad={quadr.value:.10g}",
    )

    # dependence: independence limit and dependence orderings
    tiny = DependenceModel.clayton(1e-4)
    s_tiny = MacScenario(Scenario.CLEAN, link, link, tiny, rate_threshold=2.5)
    lim = metrics.op_clean_correlated(s_tiny, Method.QUADRATURE)
    op_ind = metrics.op_clean_independent(s_op, Method.QUADRATURE)
    check(
        "op_clean_independence_limit",
        abs(lim.value - op_ind.value) < 1e-3,
        f"|delta|={abs(lim.value - op_ind.value):.2e}",
    )
    strong = DependenceModel.clayton(10.0)
    s_strong_d = MacScenario(Scenario.DOUBLY_DIRTY, link, link, strong, rate_threshold=2.5)
    s_ind_d = MacScenario(Scenario.DOUBLY_DIRTY, link, link, ind, rate_threshold=2.5)
    v_corr = metrics.op_dirty_correlated(s_strong_d, Method.CLOSED_FORM).value
    v_ind = metrics.op_dirty_independent(s_ind_d, Method.CLOSED_FORM).value
    check(
        "op_dirty_dependence_ordering",
        v_corr <= v_ind + 1e-12,
        f"corr={v_corr:.6f} indep={v_ind:.6f}",
    )
    a_corr = metrics.ac_dirty_correlated(
        MacScenario(Scenario.DOUBLY_DIRTY, link, link, strong), Method.QUADRATURE
    ).value
    a_ind = metrics.ac_dirty_independent(s_ac, Method.CLOSED_FORM).value
    check(
        "ac_dirty_dependence_ordering",
        a_corr >= a_ind - 1e-9,
        f"corr={a_corr:.6f} indep={a_ind:.6f}",
    )

    # correlation table spot checks (light-tail rows where the Pearson
    # estimator concentrates; ±0.01 band)
    cfg_rho = mcsim.McConfig(n_samples=10**6, seed=seed)
    spots = (
        (FadingParams(7.0, 7.0, 1.0), 40.0, 0.9084, 1001),
        (FadingParams(5.0, 15.0, 1.0), 40.0, 0.9467, 1002),
    )
    worst = 0.0
    for link_s, theta_s, target, stream_s in spots:
        est = metrics.correlation_coefficient(
            link_s, link_s, DependenceModel.clayton(theta_s), cfg_rho, stream=stream_s
        )
        worst = max(worst, abs(est.value - target))
    check("correlation_table_spots", worst < 0.01, f"max|emp-target|={worst:.4f}")

    # determinism of the Monte-Carlo substreams
    e1 = mcsim.estimate_op(s_op, mcsim.McConfig(n_samples=50_000, seed=seed), stream=1003)
    e2 = mcsim.estimate_op(s_op, mcsim.McConfig(n_samples=50_000, seed=seed), stream=1003)
    check("mc_determinism", e1.value == e2.value, f"v1={e1.value} v2={e2.value}")

    passed = all(c["passed"] for c in checks)
    return {"schema_version": SCHEMA_VERSION, "seed": seed, "passed": passed, "checks": checks}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _write_rows(rows: list[dict], columns: tuple[str, ...], fmt: str, out) -> None:
    if fmt == "csv":
        out.write(f"# schema_version={SCHEMA_VERSION}\n")
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    else:
        out.write(json.dumps({"schema_version": SCHEMA_VERSION}) + "\n")
        for row in rows:
            clean = {
                c: (None if isinstance(row[c], float) and not np.isfinite(row[c]) else row[c])
                for c in columns
            }
            out.write(json.dumps(clean) + "\n")


def _emit(rows: list[dict], columns: tuple[str, ...], fmt: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            _write_rows(rows, columns, fmt, fh)
    else:
        _write_rows(rows, columns, fmt, sys.stdout)


def _plot_sweep(rows: list[dict], quantity: str, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    methods = sorted({r["method"] for r in rows})
    markers = {"closed_form": "o", "quadrature": "s", "series": "^", "monte_carlo": "x"}
    for method in methods:
        pts = [(r["snr_db"], r["value"]) for r in rows if r["method"] == method and r["status"] == "ok"]
        if not pts:
            continue
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker=markers.get(method, "."), label=method)
    ax.set_xlabel("mean SNR of link 1 [dB]")
    if quantity == "op":
        ax.set_ylabel("outage probability")
        ax.set_yscale("log")
    else:
        ax.set_ylabel("average capacity [bit/s/Hz]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_scatter(rows: list[dict], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    thetas = sorted({r["theta"] for r in rows})
    for theta in thetas:
        xs = [r["gamma1"] for r in rows if r["theta"] == theta]
        ys = [r["gamma2"] for r in rows if r["theta"] == theta]
        label = "independent" if theta == 0.0 else f"theta={theta:g}"
        ax.scatter(xs, ys, s=4, alpha=0.4, label=label)
    ax.set_xlabel("SNR of link 1")
    ax.set_ylabel("SNR of link 2")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.legend(markerscale=3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return metrics.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise SystemExit(f"invalid {ENV_SEED} value {raw!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="file of key = value defaults for any long option")
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${ENV_SEED} or fixed)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write the delimited stream here instead of stdout")


def _add_sweep_args(p: argparse.ArgumentParser, quantity: str) -> None:
    p.add_argument("--scenario", choices=("clean", "doubly_dirty"), default="clean")
    p.add_argument("--dependence", choices=("independent", "clayton"), default="independent")
    p.add_argument("--theta", type=float, default=None, help="Clayton parameter (required for clayton)")
    p.add_argument("--m1", type=float, default=2.0)
    p.add_argument("--ms1", type=float, default=3.0)
    p.add_argument("--m2", type=float, default=2.0)
    p.add_argument("--ms2", type=float, default=3.0)
    p.add_argument("--snr", default="0:30:5", help="link-1 mean SNR sweep start:stop:step in dB")
    p.add_argument(
        "--link2",
        default="equal",
        help="link-2 mean SNR rule: equal, fixed:<dB>, or offset:<dB>",
    )
    if quantity == "op":
        p.add_argument("--rate", type=float, default=2.5, help="rate threshold [bit/s/Hz]")
    p.add_argument("--methods", default=None, help="comma list: closed,quad,series,mc")
    p.add_argument("--mc-samples", type=int, default=10**6)
    p.add_argument("--mc-batch", type=int, default=1 << 20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot", help="also render a PNG figure to this path")
    if quantity == "ac":
        p.add_argument(
            "--normalize-awgn",
            action="store_true",
            help="report capacity relative to the fixed-SNR (no fading) channel",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmac",
        description=(
            "Outage probability and average capacity of two-user multiple "
            "access channels under Fisher-Snedecor F fading"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_op = sub.add_parser("op", help="outage probability sweep")
    _add_sweep_args(p_op, "op")
    _add_common(p_op)

    p_ac = sub.add_parser("ac", help="average capacity sweep")
    _add_sweep_args(p_ac, "ac")
    _add_common(p_ac)

    p_corr = sub.add_parser("corr", help="SNR correlation table")
    p_corr.add_argument(
        "--thetas", default=",".join(str(t) for t in DEFAULT_CORR_THETAS),
        help="comma list of Clayton parameters",
    )
    p_corr.add_argument(
        "--shapes",
        default=None,
        help="semicolon list of m1,ms1,m2,ms2 rows (default: built-in grid)",
    )
    p_corr.add_argument("--mc-samples", type=int, default=10**6)
    p_corr.add_argument("--workers", type=int, default=1)
    _add_common(p_corr)

    p_sc = sub.add_parser("scatter", help="raw SNR sample pairs")
    p_sc.add_argument("--m1", type=float, default=3.0)
    p_sc.add_argument("--ms1", type=float, default=5.0)
    p_sc.add_argument("--m2", type=float, default=3.0)
    p_sc.add_argument("--ms2", type=float, default=5.0)
    p_sc.add_argument("--snr-db", type=float, default=0.0)
    p_sc.add_argument("--thetas", default="0,10,25,40")
    p_sc.add_argument("--n", type=int, default=2000, help="samples per theta")
    p_sc.add_argument("--plot", help="also render a PNG figure to this path")
    _add_common(p_sc)

    p_val = sub.add_parser("validate", help="run the numerical cross-check suite")
    _add_common(p_val)

    return parser


def _apply_config(argv: list[str], parser: argparse.ArgumentParser) -> list[str]:
    """Insert defaults from a --config file ahead of the explicit arguments."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        parser.error("--config requires a path")
    path = Path(argv[idx + 1])
    if not path.is_file():
        parser.error(f"config file not found: {path}")
    injected: list[str] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "yes", "on") and flag in ("--normalize-awgn",):
            injected.append(flag)
        else:
            injected.extend([flag, value])
    # command stays first; config-derived options precede explicit ones so
    # the command line wins on conflicts
    return [argv[0], *injected, *argv[1:idx], *argv[idx + 2 :]]


def _parse_methods(raw: str | None, key: tuple) -> tuple[Method, ...]:
    available = _AVAILABLE_METHODS[key]
    if raw is None:
        return tuple(m for m in available if m != Method.SERIES)
    methods = []
    for token in raw.split(","):
        token = token.strip().lower()
        if token not in _METHOD_ALIASES:
            raise SystemExit(f"unknown method {token!r}")
        m = _METHOD_ALIASES[token]
        if m not in available:
            raise SystemExit(
                f"method {token!r} is not available for this scenario/dependence "
                f"(available: {', '.join(x.value for x in available)})"
            )
        methods.append(m)
    if not methods:
        raise SystemExit("no methods requested")
    return tuple(dict.fromkeys(methods))


def _parse_snr(raw: str) -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v, 1.0
    if len(parts) != 3:
        raise SystemExit(f"--snr expects start:stop:step, got {raw!r}")
    return float(parts[0]), float(parts[1]), float(parts[2])


def _parse_thetas(raw: str) -> tuple[float, ...]:
    thetas = tuple(float(t) for t in raw.split(","))
    for t in thetas:
        if t < 0.0:
            raise ValueError(f"theta must be non-negative, got {t}")
    return thetas


def _parse_link2(raw: str) -> tuple[str, float]:
    if raw == "equal":
        return "equal", 0.0
    mode, _, val = raw.partition(":")
    if mode in ("fixed", "offset") and val:
        return mode, float(val)
    raise SystemExit(f"--link2 expects equal, fixed:<dB> or offset:<dB>, got {raw!r}")


def _dependence_from_args(args) -> DependenceModel:
    if args.dependence == "clayton":
        if args.theta is None:
            raise SystemExit("--dependence clayton requires --theta")
        return DependenceModel.clayton(args.theta)
    if args.theta is not None:
        raise SystemExit("--theta is only meaningful with --dependence clayton")
    return DependenceModel.independent()


def _sweep_spec_from_args(args, quantity: str) -> SweepSpec:
    start, stop, step = _parse_snr(args.snr)
    mode, value = _parse_link2(args.link2)
    scen = Scenario(args.scenario)
    dep = _dependence_from_args(args)
    methods = _parse_methods(args.methods, (quantity, scen, dep.kind))
    return SweepSpec(
        quantity=quantity,
        scenario=scen,
        dependence=dep,
        m1=args.m1,
        ms1=args.ms1,
        m2=args.m2,
        ms2=args.ms2,
        snr_start_db=start,
        snr_stop_db=stop,
        snr_step_db=step,
        link2_mode=mode,
        link2_value_db=value,
        rate_threshold=getattr(args, "rate", None),
        methods=methods,
        mc_samples=args.mc_samples,
        mc_batch=args.mc_batch,
        seed=args.seed if args.seed is not None else _default_seed(),
        workers=args.workers,
        normalize_awgn=getattr(args, "normalize_awgn", False),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv:
            argv = _apply_config(argv, parser)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command in ("op", "ac"):
            try:
                spec = _sweep_spec_from_args(args, args.command)
            except ValueError as exc:
                raise SystemExit(str(exc)) from exc
            rows = run_op_sweep(spec) if args.command == "op" else run_ac_sweep(spec)
            _emit(rows, SWEEP_COLUMNS, args.format, args.output)
            if args.plot:
                _plot_sweep(rows, args.command, args.plot)
            return 0 if all(r["status"] == "ok" for r in rows) else 3

        if args.command == "corr":
            seed = args.seed if args.seed is not None else _default_seed()
            try:
                thetas = _parse_thetas(args.thetas)
                if args.shapes:
                    shapes = tuple(
                        tuple(float(x) for x in row.split(","))
                        for row in args.shapes.split(";")
                        if row.strip()
                    )
                    for row in shapes:
                        if len(row) != 4:
                            raise SystemExit("--shapes rows need m1,ms1,m2,ms2")
                else:
                    shapes = tuple(tuple(float(x) for x in s) for s in DEFAULT_CORR_SHAPES)
            except ValueError as exc:
                raise SystemExit(str(exc)) from exc
            rows = run_corr_table(shapes, thetas, args.mc_samples, seed, args.workers)
            _emit(rows, CORR_COLUMNS, args.format, args.output)
            return 0

        if args.command == "scatter":
            seed = args.seed if args.seed is not None else _default_seed()
            try:
                thetas = _parse_thetas(args.thetas)
            except ValueError as exc:
                raise SystemExit(str(exc)) from exc
            rows = run_scatter(
                args.m1, args.ms1, args.m2, args.ms2, args.snr_db, thetas, args.n, seed
            )
            _emit(rows, SCATTER_COLUMNS, args.format, args.output)
            if args.plot:
                _plot_scatter(rows, args.plot)
            return 0

        if args.command == "validate":
            seed = args.seed if args.seed is not None else _default_seed()
            report = run_validate(seed)
            payload = json.dumps(report, indent=2) + "\n"
            if args.output:
                with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(payload)
            else:
                sys.stdout.write(payload)
            return 0 if report["passed"] else 3
    except SystemExit as exc:
        # option-validation helpers raise SystemExit with a message string
        if isinstance(exc.code, str):
            sys.stderr.write(f"{parser.prog}: error: {exc.code}\n")
            return 2
        return int(exc.code or 0)
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"{parser.prog}: numerical failure: {exc}\n")
        return 3
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
