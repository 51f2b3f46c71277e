"""Dataset ingestion, Kolmogorov-Smirnov machinery and verification experiments.

Three batch experiments live here:

* ``mc_convergence`` simulates ensembles of scaled paths at increasing scale
  n and measures the KS distance of each fixed-t marginal to the exact
  gamma/deterministic limit law. Marginal (fixed-t) convergence is what gets
  tested, not path-space weak convergence: the time-t projection is
  continuous on the limit's support, so marginal agreement is a valid
  necessary check at desk scale.
* ``moment_mc_check`` compares ensemble sample moments against the exact
  mean/variance formulas.
* ``boston_report`` reproduces the subset-model CLS/WCLS fits of the bundled
  Boston armed robberies series.

All outputs are plain data; rendering to CSV/JSON happens in the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path as FsPath

import numpy as np

from . import cir
from .errors import EmptyFile, ParseError
from .estimate import FitResult, cls_fit, wcls_fit
from .model import ModelSpec
from .moments import mean_exact, var_exact
from .simulate import RngStream, _simulate_block, simulate_ensemble

__all__ = [
    "CountSeries",
    "load_counts",
    "load_boston",
    "ks_statistic",
    "ks_critical",
    "ConvergenceCell",
    "ConvergenceReport",
    "mc_convergence",
    "MomentCheckRow",
    "moment_mc_check",
    "BostonReport",
    "boston_report",
    "BOSTON_LAGS",
]

BOSTON_LAGS = (1, 12)

# Values printed for the two subset INAR(12) fits in the source analysis of
# this dataset, kept for side-by-side reporting.
BOSTON_REFERENCE = {
    "cls": {"alpha_1": 0.6069, "alpha_12": 0.412, "mu": 14.971, "sigma": 1.0189, "se": 526.8},
    "wcls": {"alpha_1": 0.682, "alpha_12": 0.3497, "mu": 9.961, "sigma": 1.0317, "se": 26.18},
}


@dataclass(frozen=True)
class CountSeries:
    """A nonnegative integer series plus a provenance note."""

    values: np.ndarray
    source: str

    def __len__(self) -> int:
        return len(self.values)


def load_counts(path) -> CountSeries:
    """Parse whitespace/newline separated nonnegative integers.

    Lines starting with '#' are comments. Raises :class:`ParseError` on any
    non-integer or negative token and :class:`EmptyFile` when nothing
    remains.
    """
    path = FsPath(path)
    values: list[int] = []
    for line in path.read_text().splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for token in stripped.split():
            try:
                value = int(token)
            except ValueError as exc:
                raise ParseError(f"non-integer token {token!r} in {path}") from exc
            if value < 0:
                raise ParseError(f"negative count {value} in {path}")
            values.append(value)
    if not values:
        raise EmptyFile(f"no counts found in {path}")
    return CountSeries(values=np.array(values, dtype=np.int64), source=str(path))


def load_boston() -> CountSeries:
    """The bundled Boston armed robberies series (118 monthly counts)."""
    ref = resources.files("inarlab.data").joinpath("boston_robberies.txt")
    with resources.as_file(ref) as path:
        series = load_counts(path)
    return CountSeries(values=series.values, source="bundled:boston_robberies")


def ks_statistic(sample, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance of a sample to a CDF.

    D = sup_i max(|i/m - F(x_(i))|, |(i-1)/m - F(x_(i))|) over the order
    statistics, valid for samples with ties.
    """
    s = np.sort(np.asarray(sample, dtype=float))
    m = len(s)
    if m == 0:
        raise ValueError("sample must be nonempty")
    f = np.asarray(cdf(s), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


def ks_critical(m: int, level: float = 0.01) -> float:
    """Asymptotic KS critical value; only the 1% level is tabulated here."""
    if level != 0.01:
        raise ValueError("only the 1% level constant (1.63) is supported")
    return 1.63 / math.sqrt(m)


@dataclass(frozen=True)
class ConvergenceCell:
    """One (scale, time) cell of the convergence experiment."""

    n: int
    t: float
    reps: int
    mean: float
    variance: float
    ks: float
    ks_crit: float
    limit_mean: float
    limit_variance: float


@dataclass(frozen=True)
class ConvergenceReport:
    cells: tuple
    # per t: did KS at the largest n come out below KS at the smallest n?
    # Expected for a convergent sequence but noisy, so reported, not asserted.
    ks_improved: dict


def mc_convergence(
    spec: ModelSpec,
    n_list,
    t_grid,
    reps: int,
    base_seed: int,
    workers: int = 1,
) -> ConvergenceReport:
    """Measure the distance of scaled-path marginals to the limit law.

    For each scale n, simulates an ensemble of scaled values and computes
    the KS distance to the exact limit marginal at every requested t > 0.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    t_grid = [float(t) for t in t_grid]
    if any(t <= 0.0 for t in t_grid):
        raise ValueError("t = 0 is the degenerate point mass at zero; use t > 0")
    params = cir.params_from_model(spec)
    cells = []
    crit = ks_critical(reps)
    for n in sorted(int(n) for n in n_list):
        values = simulate_ensemble(spec, n, t_grid, reps, base_seed, workers=workers)
        for j, t in enumerate(t_grid):
            law = cir.exact_marginal(params, t)
            col = values[:, j]
            cells.append(
                ConvergenceCell(
                    n=n,
                    t=t,
                    reps=reps,
                    mean=float(col.mean()),
                    variance=float(col.var(ddof=1)) if reps > 1 else 0.0,
                    ks=ks_statistic(col, law.cdf),
                    ks_crit=crit,
                    limit_mean=law.mean,
                    limit_variance=law.variance,
                )
            )
    ks_improved = {}
    ns = sorted({c.n for c in cells})
    if len(ns) >= 2:
        for t in t_grid:
            first = next(c.ks for c in cells if c.n == ns[0] and c.t == t)
            last = next(c.ks for c in cells if c.n == ns[-1] and c.t == t)
            ks_improved[t] = last <= first
    return ConvergenceReport(cells=tuple(cells), ks_improved=ks_improved)


@dataclass(frozen=True)
class MomentCheckRow:
    k: int
    reps: int
    sample_mean: float
    exact_mean: float
    mean_se: float
    sample_variance: float
    exact_variance: float
    variance_se: float
    mean_ok: bool
    variance_ok: bool


def moment_mc_check(spec: ModelSpec, k_list, reps: int, base_seed: int) -> list:
    """Compare ensemble sample moments with the exact formulas.

    Flags any deviation beyond 4 standard errors. The variance of the sample
    variance is itself estimated from the sample's fourth central moment.
    """
    if reps < 1000:
        raise ValueError("use at least 10^3 replicates")
    k_list = sorted(int(k) for k in k_list)
    if k_list[0] < 1:
        raise ValueError("k values must be >= 1")
    kmax = k_list[-1]
    counts, _ = _simulate_block(spec, kmax, reps, RngStream(base_seed, 0))
    exact_mean = mean_exact(spec, kmax)
    exact_var = var_exact(spec, kmax)
    rows = []
    for k in k_list:
        col = counts[:, k - 1].astype(float)
        centered = col - col.mean()
        s2 = float(centered @ centered) / (reps - 1)
        m4 = float(np.mean(centered**4))
        mean_se = math.sqrt(max(s2, 0.0) / reps)
        var_of_s2 = max(m4 - (reps - 3) / (reps - 1) * s2 * s2, 0.0) / reps
        var_se = math.sqrt(var_of_s2)
        mean_ok = abs(col.mean() - exact_mean[k - 1]) <= 4.0 * mean_se if mean_se > 0 else col.mean() == exact_mean[k - 1]
        var_ok = abs(s2 - exact_var[k - 1]) <= 4.0 * var_se if var_se > 0 else s2 == exact_var[k - 1]
        rows.append(
            MomentCheckRow(
                k=k,
                reps=reps,
                sample_mean=float(col.mean()),
                exact_mean=float(exact_mean[k - 1]),
                mean_se=mean_se,
                sample_variance=s2,
                exact_variance=float(exact_var[k - 1]),
                variance_se=var_se,
                mean_ok=bool(mean_ok),
                variance_ok=bool(var_ok),
            )
        )
    return rows


@dataclass(frozen=True)
class BostonReport:
    cls: FitResult
    wcls: FitResult
    reference: dict
    table: str


def boston_report(series: CountSeries) -> BostonReport:
    """Fit the lag {1, 12} subset model both ways and format a comparison."""
    if len(series) < max(BOSTON_LAGS) + len(BOSTON_LAGS) + 2:
        raise ValueError("series too short for the lag {1, 12} subset model")
    fit_cls = cls_fit(series.values, BOSTON_LAGS)
    fit_wcls = wcls_fit(series.values, BOSTON_LAGS)
    lines = [
        f"{'':14s}{'alpha_1':>10s}{'alpha_12':>10s}{'mu':>10s}{'sigma':>10s}{'se':>10s}",
    ]
    for label, fr, ref in (
        ("cls", fit_cls, BOSTON_REFERENCE["cls"]),
        ("wcls", fit_wcls, BOSTON_REFERENCE["wcls"]),
    ):
        lines.append(
            f"{label + ' fitted':14s}{fr.alpha_hat[1]:10.4f}{fr.alpha_hat[12]:10.4f}"
            f"{fr.mu_hat:10.4f}{fr.sigma:10.4f}{fr.se:10.4f}"
        )
        lines.append(
            f"{label + ' printed':14s}{ref['alpha_1']:10.4f}{ref['alpha_12']:10.4f}"
            f"{ref['mu']:10.4f}{ref['sigma']:10.4f}{ref['se']:10.4f}"
        )
    return BostonReport(cls=fit_cls, wcls=fit_wcls, reference=BOSTON_REFERENCE, table="\n".join(lines))
