"""Exact moment sequences of a zero-start INAR(p) process.

With the convention X_0 = ... = X_{1-p} = 0 and finite innovation variance,
the first two moments have closed forms in terms of the scalar companion
weights w_j = e1^T A^j e1:

    E X_k      = mu_eps * sum_{j<k} w_j
    E M_k^2    = sum_i a_i (1 - a_i) E X_{k-i} + sigma_eps^2
    Var X_k    = sigma_eps^2 sum_{l<k} w_l^2
                 + mu_eps sum_i a_i(1-a_i) sum_{j=0}^{k-i-1} w_{k-j-i-1}^2 S_j

where M_k = X_k - E(X_k | past) are the conditional-expectation residuals
(martingale differences) and S_j = sum_{l<=j} w_l. The variance also equals
the martingale-sum form sum_{j<=k} E(M_j^2) w_{k-j}^2; both are implemented
and serve as an internal cross-check. The sums are arranged as discrete
convolutions, so a full table to horizon K costs one length-K convolution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import HorizonTooLarge, NotPrimitive, WrongRegime
from .model import Classification, ModelSpec, Regime, classify, gcd_support
from .spectral import power_weights

__all__ = [
    "MomentTable",
    "moment_table",
    "mean_exact",
    "var_exact",
    "var_from_martingale_sums",
    "m2_exact",
    "MeanLimit",
    "Normalization",
    "mean_limit",
    "GrowthReport",
    "growth_check",
]

# Full tables cost O(K^2) through the convolution; refuse silly horizons.
MAX_HORIZON = 100_000


def _check_horizon(K: int) -> None:
    if K < 1:
        raise ValueError("horizon must be >= 1")
    if K > MAX_HORIZON:
        raise HorizonTooLarge(f"horizon {K} exceeds the supported maximum {MAX_HORIZON}")


def mean_exact(spec: ModelSpec, K: int) -> np.ndarray:
    """E X_k for k = 1..K (index k-1), exact up to float rounding."""
    _check_horizon(K)
    w = power_weights(spec, K - 1)
    return spec.mu_eps * np.cumsum(w)


def m2_exact(spec: ModelSpec, K: int) -> np.ndarray:
    """Second moments E M_k^2 of the martingale differences for k = 1..K."""
    _check_horizon(K)
    mean = mean_exact(spec, K)
    out = np.full(K, spec.sigma_eps_sq)
    for i, a in enumerate(spec.alphas, start=1):
        coeff = a * (1.0 - a)
        if coeff == 0.0 or i >= K + 1:
            continue
        # E X_{k-i} is zero-start zero for k <= i
        out[i:] += coeff * mean[: K - i]
    return out


def var_exact(spec: ModelSpec, K: int) -> np.ndarray:
    """Var X_k for k = 1..K via the moment formula in closed form.

    The inner double sum collapses to conv[q] = sum_m w_m^2 S_{q-m}, one
    discrete convolution shared by every k and lag.
    """
    _check_horizon(K)
    w = power_weights(spec, K - 1)
    w2 = w * w
    c2 = np.cumsum(w2)
    conv = np.convolve(w2, np.cumsum(w))[:K]
    out = spec.sigma_eps_sq * c2
    mu = spec.mu_eps
    for i, a in enumerate(spec.alphas, start=1):
        coeff = a * (1.0 - a)
        if coeff == 0.0 or i + 1 > K:
            continue
        # term at index k-1 uses conv[k-i-1]; zero when k <= i
        out[i:] += mu * coeff * conv[: K - i]
    return out


def var_from_martingale_sums(spec: ModelSpec, K: int) -> np.ndarray:
    """Var X_k = sum_{j=1}^k E(M_j^2) w_{k-j}^2, the alternative route."""
    _check_horizon(K)
    w = power_weights(spec, K - 1)
    m2 = m2_exact(spec, K)
    return np.convolve(m2, w * w)[:K]


@dataclass(frozen=True)
class MomentTable:
    """Exact mean, variance and martingale second-moment sequences, k = 1..K."""

    K: int
    mean: np.ndarray
    variance: np.ndarray
    m2: np.ndarray


def moment_table(spec: ModelSpec, K: int) -> MomentTable:
    return MomentTable(K=K, mean=mean_exact(spec, K), variance=var_exact(spec, K), m2=m2_exact(spec, K))


class Normalization(enum.Enum):
    """How the limiting constant of E X_k is normalized."""

    PLAIN = "plain"  # lim E X_k
    PER_STEP = "per_step"  # lim E X_k / k
    GEOMETRIC_SUBSEQUENCE = "geometric_subsequence"  # lim rho^(-kd) E X_{kd-j}


@dataclass(frozen=True)
class MeanLimit:
    regime: Regime
    value: float
    normalization: Normalization
    d: int = 1
    rho: float = 0.0


def mean_limit(spec: ModelSpec) -> MeanLimit:
    """Limiting behavior of E X_k by regime.

    Stable: E X_k -> mu / (1 - sum a). Unstable: E X_k / k -> mu / phi'(1).
    Explosive: rho^(-kd) E X_{kd-j} -> d mu rho^(p-1) / ((rho^d - 1) phi'(rho))
    along each of the d interleaved subsequences (the limit does not depend
    on j).
    """
    mu = spec.mu_eps
    cls: Classification = classify(spec)
    if cls.regime is Regime.STABLE:
        value = mu if spec.is_degenerate else mu / (1.0 - cls.alpha_sum)
        return MeanLimit(Regime.STABLE, value, Normalization.PLAIN, d=cls.d, rho=cls.rho)
    if cls.regime is Regime.UNSTABLE:
        return MeanLimit(
            Regime.UNSTABLE, mu / cls.phi_prime_at_one, Normalization.PER_STEP, d=cls.d, rho=cls.rho
        )
    rho = cls.rho
    d = cls.d
    from .spectral import _phi_prime

    value = d * mu * rho ** (spec.p - 1) / ((rho**d - 1.0) * _phi_prime(spec, rho))
    return MeanLimit(Regime.EXPLOSIVE, value, Normalization.GEOMETRIC_SUBSEQUENCE, d=d, rho=rho)


@dataclass(frozen=True)
class GrowthReport:
    """Growth-order diagnostics for a primitive unstable spec.

    E X_k grows linearly, E X_k^2 quadratically and E M_k^2 linearly; the
    report carries the maxima of the correspondingly normalized sequences
    over k <= K together with the per-step mean ratio at the horizon.
    """

    K: int
    max_mean_over_k: float
    max_second_moment_over_k2: float
    max_m2_over_k: float
    mean_ratio_at_K: float
    per_step_limit: float


def growth_check(spec: ModelSpec, K: int) -> GrowthReport:
    """Verify O(k) / O(k^2) growth of the exact moments up to horizon K."""
    cls = classify(spec)
    if cls.regime is not Regime.UNSTABLE:
        raise WrongRegime(f"growth orders hold in the unstable regime, spec is {cls.regime.value}")
    if not spec.is_degenerate and gcd_support(spec) != 1:
        raise NotPrimitive("growth diagnostics need a primitive spec")
    table = moment_table(spec, K)
    ks = np.arange(1, K + 1, dtype=float)
    mean_over_k = table.mean / ks
    second = (table.variance + table.mean**2) / ks**2
    m2_over_k = table.m2 / ks
    for arr, name in ((mean_over_k, "mean/k"), (second, "EX^2/k^2"), (m2_over_k, "m2/k")):
        if not np.all(np.isfinite(arr)):
            raise WrongRegime(f"{name} not finite; regime misclassified?")
    return GrowthReport(
        K=K,
        max_mean_over_k=float(np.max(mean_over_k)),
        max_second_moment_over_k2=float(np.max(second)),
        max_m2_over_k=float(np.max(m2_over_k)),
        mean_ratio_at_K=float(mean_over_k[-1]),
        per_step_limit=spec.mu_eps / spec.phi_prime_at_one,
    )
