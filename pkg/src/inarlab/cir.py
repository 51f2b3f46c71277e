"""The diffusion limit of scaled unstable INAR(p) paths.

For a primitive unstable spec (coefficients summing to 1), the step
processes n^-1 X_{floor(nt)} converge weakly to the unique strong solution
of

    dX_t = a dt + sqrt(b2 * max(X_t, 0)) dW_t,   X_0 = 0,

with a = mu_eps / phi'(1) and b2 = sigma_alpha^2 / phi'(1)^2: a squared
Bessel (equivalently zero-reversion Cox-Ingersoll-Ross) process. The process
is nonnegative, and its time-t marginal from a zero start is
Gamma(shape = 2a/b2, scale = b2 t / 2) -- a standard squared-Bessel fact
whose adoption here is gated behind an in-repo oracle: the test suite checks
the gamma law against full-truncation Euler paths by Kolmogorov-Smirnov
distance before any experiment relies on it. With b2 = 0 (every coefficient
0 or 1, e.g. p = 1) the limit degenerates to the line X_t = a t.

An equivalent drift-free form tracks the accumulated martingale part
M_t = phi'(1) X_t - mu_eps t, which solves

    dM_t = sqrt(c * max(M_t + mu_eps t, 0)) dW_t,   c = sigma_alpha^2 / phi'(1);

the affine map between the two is checked distributionally in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import NotPrimitive, WrongRegime
from .model import ModelSpec, Regime, classify
from .simulate import _as_generator

__all__ = [
    "CirParams",
    "params_from_model",
    "MartingaleParams",
    "params_m",
    "euler_path",
    "euler_values",
    "euler_martingale_values",
    "DegenerateMarginal",
    "GammaMarginal",
    "exact_marginal",
    "sample_marginal",
]


@dataclass(frozen=True)
class CirParams:
    """Drift rate ``a`` and squared diffusion coefficient ``b2``.

    b2 = 0 exactly when every coefficient is 0 or 1, in which case the
    process is the deterministic line a t.
    """

    a: float
    b2: float

    def __post_init__(self):
        if self.a < 0.0 or self.b2 < 0.0:
            raise ValueError("parameters must be nonnegative")


@dataclass(frozen=True)
class MartingaleParams:
    """Parameters (mu, c) of the drift-free form dM = sqrt(c (M + mu t)^+) dW."""

    mu: float
    c: float


def _require_primitive_unstable(spec: ModelSpec):
    cls = classify(spec)
    if not cls.primitive:
        raise NotPrimitive("the diffusion limit holds for primitive specs; decompose first")
    if cls.regime is not Regime.UNSTABLE:
        raise WrongRegime(f"the diffusion limit holds in the unstable regime, spec is {cls.regime.value}")
    return cls


def params_from_model(spec: ModelSpec) -> CirParams:
    """Limit-diffusion parameters of a primitive unstable spec."""
    _require_primitive_unstable(spec)
    phi1 = spec.phi_prime_at_one
    return CirParams(a=spec.mu_eps / phi1, b2=spec.sigma_alpha_sq / phi1**2)


def params_m(spec: ModelSpec) -> MartingaleParams:
    """Parameters of the drift-free martingale form for the same spec.

    M_t = phi'(1) X_t - mu t maps solutions of the X-equation onto solutions
    of dM = sqrt(c (M + mu t)^+) dW and back.
    """
    _require_primitive_unstable(spec)
    return MartingaleParams(mu=spec.mu_eps, c=spec.sigma_alpha_sq / spec.phi_prime_at_one)


def euler_path(params: CirParams, T: float, dt: float, rng) -> np.ndarray:
    """One full-truncation Euler path on the dt-grid, including t = 0.

    X <- X + a dt + sqrt(b2 max(X, 0) dt) Z with the output clamped at 0;
    the true process is nonnegative, only the discretization dips below.
    """
    values = euler_values(params, np.arange(1, _nsteps(T, dt) + 1) * dt, dt, 1, rng)
    return np.concatenate(([0.0], values[0]))


def _nsteps(T: float, dt: float) -> int:
    if dt <= 0.0 or T < dt:
        raise ValueError("need dt > 0 and T >= dt")
    return int(round(T / dt))


def euler_values(params: CirParams, t_grid, dt: float, reps: int, rng, return_negative_fraction: bool = False):
    """Full-truncation Euler marginals at the requested times, many paths.

    Marches ``reps`` paths simultaneously and records the state at each grid
    time (snapped to the nearest step). Returns a (reps, len(t_grid)) array,
    clamped nonnegative; the internal state is left unclamped, with the
    diffusion shut off while it is negative, which is what full truncation
    means. With ``return_negative_fraction`` the fraction of steps spent
    below zero before clamping is returned as well; it vanishes as dt -> 0.
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    nsteps = _nsteps(float(np.max(t_grid)), dt)
    marks: dict[int, list[int]] = {}
    for j, t in enumerate(t_grid):
        marks.setdefault(int(round(t / dt)), []).append(j)
    gen = _as_generator(rng)
    sqdt = math.sqrt(dt)
    x = np.zeros(reps)
    out = np.empty((reps, len(t_grid)))
    negatives = 0
    for j in marks.get(0, []):
        out[:, j] = 0.0
    for k in range(1, nsteps + 1):
        z = gen.standard_normal(reps)
        x = x + params.a * dt + np.sqrt(params.b2 * np.maximum(x, 0.0)) * sqdt * z
        negatives += int(np.count_nonzero(x < 0.0))
        if k in marks:
            clamped = np.maximum(x, 0.0)
            for j in marks[k]:
                out[:, j] = clamped
    if return_negative_fraction:
        return out, negatives / (nsteps * reps)
    return out


def euler_martingale_values(params: MartingaleParams, t_grid, dt: float, reps: int, rng) -> np.ndarray:
    """Euler marginals of the drift-free form dM = sqrt(c (M + mu t)^+) dW."""
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    nsteps = _nsteps(float(np.max(t_grid)), dt)
    marks: dict[int, list[int]] = {}
    for j, t in enumerate(t_grid):
        marks.setdefault(int(round(t / dt)), []).append(j)
    gen = _as_generator(rng)
    sqdt = math.sqrt(dt)
    m = np.zeros(reps)
    out = np.empty((reps, len(t_grid)))
    for j in marks.get(0, []):
        out[:, j] = 0.0
    for k in range(1, nsteps + 1):
        z = gen.standard_normal(reps)
        drift_floor = params.mu * (k - 1) * dt
        m = m + np.sqrt(params.c * np.maximum(m + drift_floor, 0.0)) * sqdt * z
        if k in marks:
            for j in marks[k]:
                out[:, j] = m
    return out


@dataclass(frozen=True)
class DegenerateMarginal:
    """Point mass: the b2 = 0 limit is the deterministic line a t."""

    value: float

    @property
    def mean(self) -> float:
        return self.value

    @property
    def variance(self) -> float:
        return 0.0

    def cdf(self, x):
        return (np.asarray(x, dtype=float) >= self.value).astype(float)

    def sample(self, rng, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)


@dataclass(frozen=True)
class GammaMarginal:
    """Gamma(shape, scale) law of the zero-start marginal at a fixed time."""

    shape: float
    scale: float

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale**2

    def cdf(self, x):
        return stats.gamma.cdf(x, a=self.shape, scale=self.scale)

    def sample(self, rng, size=None):
        gen = _as_generator(rng)
        return gen.gamma(self.shape, self.scale, size)


def exact_marginal(params: CirParams, t: float):
    """Time-t marginal law from a zero start.

    Deterministic(a t) when b2 = 0, else Gamma(2a/b2, b2 t/2). Mean a t and
    variance a b2 t^2 / 2 in both cases.
    """
    if t <= 0.0:
        raise ValueError("t must be positive (the t = 0 marginal is the point mass at 0)")
    if params.b2 == 0.0:
        return DegenerateMarginal(params.a * t)
    return GammaMarginal(shape=2.0 * params.a / params.b2, scale=params.b2 * t / 2.0)


def sample_marginal(params: CirParams, t: float, rng, size=None):
    """Draw from the exact time-t marginal."""
    return exact_marginal(params, t).sample(rng, size)
