"""Conditional least squares estimation of subset INAR(p) models.

Given counts X_1..X_n and a set of lags L with largest element pbar, the CLS
estimator minimizes the sum over k = pbar+1..n of

    M_k^2,   M_k = X_k - sum_{i in L} a_i X_{k-i} - mu,

a linear least-squares problem in (a_i, mu). The weighted variant (WCLS)
divides each residual by sqrt(sum_{j in L} X_{k-j} + 1), which makes the
conditional variance of the weighted residuals asymptotically homogeneous
even when the sample path grows without bound, and minimizes the weighted
residual sum of squares instead.

Coefficients are intentionally NOT constrained to [0, 1]: fitted unstable
models routinely have coefficient sums above 1, which is the very quantity
of interest. A warning is attached to the result instead whenever an
estimate leaves the thinning range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientData, SingularDesign

__all__ = [
    "Method",
    "FitConfig",
    "FitResult",
    "cls_fit",
    "wcls_fit",
    "fit",
    "standard_error",
    "residual_acf",
]


class Method(enum.Enum):
    CLS = "cls"
    WCLS = "wcls"


@dataclass(frozen=True)
class FitConfig:
    """Subset-model support (strictly increasing positive lags) and method."""

    lags: tuple
    method: Method = Method.CLS

    def __post_init__(self):
        lags = tuple(int(l) for l in self.lags)
        if not lags:
            raise ValueError("at least one lag is required")
        if any(l < 1 for l in lags) or any(b <= a for a, b in zip(lags, lags[1:])):
            raise ValueError("lags must be strictly increasing positive integers")
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "method", Method(self.method))


@dataclass(frozen=True)
class FitResult:
    """Point estimates and residual diagnostics of a (W)CLS fit.

    ``sigma`` is the unstability index, the exact sum of the fitted
    coefficients; ``se`` the degrees-of-freedom corrected root mean square
    of the (weighted, for WCLS) residuals; ``sample_range`` the 1-based
    first and last observation indices entering the objective.
    """

    method: Method
    alpha_hat: dict
    mu_hat: float
    sigma: float
    se: float
    residuals: np.ndarray
    weighted_residuals: np.ndarray | None
    sample_range: tuple
    warnings: tuple = field(default=())


def _normalize_lags(config) -> tuple:
    if isinstance(config, FitConfig):
        return config.lags
    return FitConfig(lags=tuple(sorted(set(int(l) for l in config)))).lags


def _design(data: np.ndarray, lags: tuple) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = len(data)
    pbar = max(lags)
    r = len(lags) + 1
    if n <= pbar + r:
        raise InsufficientData(f"need more than max(lags)+{r} = {pbar + r} observations, got {n}")
    ks = np.arange(pbar, n)  # 0-based targets for 1-based k = pbar+1..n
    cols = [data[ks - l] for l in lags] + [np.ones(len(ks))]
    return np.column_stack(cols), data[ks], ks


def _solve_ls(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    # SVD-based least squares; a rank-deficient design means the
    # coefficients are not identified, so refuse the pseudo-inverse answer.
    beta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise SingularDesign(f"design matrix has rank {rank} < {design.shape[1]}")
    return beta


def standard_error(residuals: np.ndarray, n: int, pbar: int, r: int) -> float:
    """Degrees-of-freedom corrected root mean square residual.

    SE = sqrt(sum(res^2) / (n - pbar - r)) with r estimated parameters
    (the lag coefficients plus the constant).
    """
    dof = n - pbar - r
    if dof <= 0:
        raise InsufficientData(f"nonpositive degrees of freedom {dof}")
    return math.sqrt(float(residuals @ residuals) / dof)


def _build_result(method, data, lags, design, target, ks, weights=None):
    n = len(data)
    pbar = max(lags)
    r = len(lags) + 1
    if weights is None:
        beta = _solve_ls(design, target)
        residuals = target - design @ beta
        weighted = None
        se = standard_error(residuals, n, pbar, r)
    else:
        beta = _solve_ls(design * weights[:, None], target * weights)
        residuals = target - design @ beta
        weighted = residuals * weights
        se = standard_error(weighted, n, pbar, r)
    alpha_hat = {l: float(b) for l, b in zip(lags, beta[:-1])}
    warnings = tuple(
        f"alpha_{l} = {a:.6g} outside [0, 1]" for l, a in alpha_hat.items() if not 0.0 <= a <= 1.0
    )
    return FitResult(
        method=method,
        alpha_hat=alpha_hat,
        mu_hat=float(beta[-1]),
        sigma=math.fsum(alpha_hat.values()),
        se=se,
        residuals=residuals,
        weighted_residuals=weighted,
        sample_range=(pbar + 1, n),
        warnings=warnings,
    )


def _check_counts(data) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != 1:
        raise ValueError("data must be one-dimensional")
    if np.any(arr < 0) or not np.allclose(arr, np.round(arr)):
        raise ValueError("data must be nonnegative integer counts")
    return arr.astype(float)


def cls_fit(data, config) -> FitResult:
    """Conditional least squares fit of a subset model.

    ``config`` is a :class:`FitConfig` or simply an iterable of lags.
    Observations before max(lags)+1 enter only as regressors.
    """
    arr = _check_counts(data)
    lags = _normalize_lags(config)
    design, target, ks = _design(arr, lags)
    return _build_result(Method.CLS, arr, lags, design, target, ks)


def wcls_fit(data, config) -> FitResult:
    """Weighted conditional least squares fit of a subset model.

    Residual k is weighted by 1/sqrt(sum_{j in lags} X_{k-j} + 1); the +1
    keeps the weight finite when all the referenced lags are zero.
    """
    arr = _check_counts(data)
    lags = _normalize_lags(config)
    design, target, ks = _design(arr, lags)
    weights = 1.0 / np.sqrt(design[:, :-1].sum(axis=1) + 1.0)
    return _build_result(Method.WCLS, arr, lags, design, target, ks, weights=weights)


def fit(data, config: FitConfig) -> FitResult:
    """Dispatch on ``config.method``."""
    config = config if isinstance(config, FitConfig) else FitConfig(lags=tuple(config))
    if config.method is Method.WCLS:
        return wcls_fit(data, config)
    return cls_fit(data, config)


def residual_acf(residuals, max_lag: int) -> tuple[np.ndarray, float]:
    """Sample autocorrelations at lags 1..max_lag with the white-noise band.

    Returns (acf, band) where +-band = +-2/sqrt(n) is the approximate 95%
    interval under the white-noise hypothesis. Lag 0 is identically 1 and is
    not included.
    """
    res = np.asarray(residuals, dtype=float)
    n = len(res)
    if n <= max_lag:
        raise ValueError("need more residuals than requested lags")
    centered = res - res.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise ValueError("residuals have zero variance; autocorrelation undefined")
    acf = np.array([float(centered[h:] @ centered[:-h]) / denom for h in range(1, max_lag + 1)])
    return acf, 2.0 / math.sqrt(n)
