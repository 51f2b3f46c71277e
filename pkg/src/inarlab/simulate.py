"""Exact-distribution simulation of INAR(p) paths.

Each step draws one binomial thinning per lag plus one innovation:

    X_k = thin(X_{k-1}, a1) + ... + thin(X_{k-p}, ap) + eps_k

from a zero start. All samplers are exact in distribution (no normal
approximation anywhere); the limit law being verified downstream is
distribution sensitive, so approximate thinning would poison the experiment.

Randomness comes from counter-based Philox streams keyed by
(base_seed, stream_index): distinct keys give statistically independent
streams, identical keys reproduce draws bit for bit, which is what makes
ensembles deterministic regardless of how replicates are scheduled across
workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .errors import HorizonExceeded, HorizonOverflow, MalformedInnovation
from .model import ModelSpec

__all__ = [
    "RngStream",
    "thin",
    "Path",
    "simulate_path",
    "conditional_mean_check",
    "scaled_value",
    "simulate_ensemble",
]

# Counts live in int64; fail fast well before wrap-around.
COUNT_CAP = 1 << 62

# Tier boundaries for the thinning sampler.
_BERNOULLI_MAX = 64
_INVERSION_MAX = 1000


@dataclass(frozen=True)
class RngStream:
    """Handle for one reproducible random stream.

    The pair (base_seed, stream_index) is the 128-bit Philox key; call
    :meth:`generator` to obtain the live numpy Generator that actually
    produces draws.
    """

    base_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.base_seed < 1 << 64):
            raise ValueError("base_seed must fit in 64 bits")
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.base_seed, self.stream_index]))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return RngStream(int(rng)).generator()


def thin(x: int, alpha: float, rng: np.random.Generator) -> int:
    """Binomial thinning: a Binomial(x, alpha) draw, exact in distribution.

    Strategy by size: summed Bernoulli trials below 64, CDF inversion (with
    the complement trick so the walk starts from the likelier end) below
    1000, and numpy's rejection sampler above. The result never exceeds x;
    x = 0 or alpha = 0 give 0 and alpha = 1 gives x without consuming
    randomness.
    """
    if x < 0:
        raise ValueError("thinning needs a nonnegative count")
    if x == 0 or alpha == 0.0:
        return 0
    if alpha == 1.0:
        return x
    if x < _BERNOULLI_MAX:
        return int(np.count_nonzero(rng.random(x) < alpha))
    if x < _INVERSION_MAX:
        a = alpha
        flip = a > 0.5
        if flip:
            a = 1.0 - a
        u = rng.random()
        ratio = a / (1.0 - a)
        pmf = (1.0 - a) ** x
        cum = pmf
        k = 0
        while u > cum and k < x:
            k += 1
            pmf *= ratio * (x - k + 1) / k
            cum += pmf
        return x - k if flip else k
    return int(rng.binomial(x, alpha))


@dataclass(frozen=True)
class Path:
    """One simulated trajectory X_1..X_N (the zero start is implicit).

    When requested, ``mdiffs`` carries the martingale differences
    M_k = X_k - sum_i a_i X_{k-i} - mu_eps computed alongside the counts.
    """

    spec: ModelSpec
    counts: np.ndarray
    mdiffs: np.ndarray | None = None

    @property
    def horizon(self) -> int:
        return len(self.counts)


def simulate_path(spec: ModelSpec, N: int, rng, record_mdiffs: bool = False) -> Path:
    """Simulate a zero-start path of length N.

    ``rng`` may be an :class:`RngStream`, a live Generator, or an integer
    seed. Draw order is fixed (thinnings in lag order, then the innovation),
    so a given (spec, N, stream) always reproduces the same path. Raises
    :class:`HorizonOverflow` if a count exceeds the 64-bit capacity, which
    explosive specs will eventually do.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if spec.innovation is None:
        raise MalformedInnovation("simulation needs an innovation distribution")
    gen = _as_generator(rng)
    alphas = spec.alphas
    p = spec.p
    mu = spec.mu_eps if record_mdiffs else 0.0
    counts = np.empty(N, dtype=np.int64)
    mdiffs = np.empty(N) if record_mdiffs else None
    window = [0] * p  # X_{k-1}, ..., X_{k-p}
    for k in range(N):
        total = 0
        for i in range(p):
            total += thin(window[i], alphas[i], gen)
        total += int(spec.innovation.sample(gen))
        if total > COUNT_CAP:
            raise HorizonOverflow(f"count exceeded capacity at step {k + 1}")
        counts[k] = total
        if record_mdiffs:
            mdiffs[k] = total - math.fsum(a * w for a, w in zip(alphas, window)) - mu
        if p:
            window.insert(0, total)
            window.pop()
    return Path(spec=spec, counts=counts, mdiffs=mdiffs)


def conditional_mean_check(spec: ModelSpec, history, reps: int, rng) -> float:
    """Monte Carlo estimate of the one-step conditional mean from a fixed history.

    ``history`` lists the last p counts (most recent first). The estimate
    targets sum_i a_i * history_i + mu_eps; with reps >= 10^4 it lands within
    a few standard errors of that value.
    """
    if reps < 10_000:
        raise ValueError("use at least 10^4 replicates")
    history = list(history)
    if len(history) != spec.p:
        raise ValueError(f"history must supply exactly p={spec.p} lagged counts")
    if spec.innovation is None:
        raise MalformedInnovation("simulation needs an innovation distribution")
    gen = _as_generator(rng)
    total = np.zeros(reps, dtype=np.int64)
    for x, a in zip(history, spec.alphas):
        total += gen.binomial(int(x), a, reps)
    total += spec.innovation.sample(gen, reps)
    return float(total.mean())


def scaled_value(path: Path, n: int, t: float) -> float:
    """Value of the scaled step process X_{floor(n t)} / n.

    Piecewise constant between grid points k/n; t below 1/n returns 0 (zero
    start). Raises :class:`HorizonExceeded` when floor(n t) lies beyond the
    simulated horizon.
    """
    if n < 1:
        raise ValueError("scale n must be >= 1")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    idx = math.floor(n * t)
    if idx > path.horizon:
        raise HorizonExceeded(f"floor(n t) = {idx} exceeds horizon {path.horizon}")
    if idx == 0:
        return 0.0
    return float(path.counts[idx - 1]) / n


def _ensemble_chunk(spec: ModelSpec, horizon: int, n: int, t_grid, base_seed: int, reps) -> np.ndarray:
    out = np.empty((len(reps), len(t_grid)))
    for row, r in enumerate(reps):
        path = simulate_path(spec, horizon, RngStream(base_seed, r))
        for col, t in enumerate(t_grid):
            out[row, col] = scaled_value(path, n, t)
    return out


def simulate_ensemble(
    spec: ModelSpec,
    n: int,
    t_grid,
    reps: int,
    base_seed: int,
    workers: int = 1,
) -> np.ndarray:
    """Scaled values X_{floor(n t)} / n over an ensemble of replicates.

    Returns a (reps, len(t_grid)) matrix whose row r comes from the path
    simulated with stream index r. Replicates are independent by stream
    construction, so the computation parallelizes across workers with output
    identical for any worker count.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    t_grid = [float(t) for t in t_grid]
    if any(t < 0.0 for t in t_grid):
        raise ValueError("t_grid values must be nonnegative")
    horizon = max(1, math.ceil(n * max(t_grid)))
    if workers <= 1:
        return _ensemble_chunk(spec, horizon, n, t_grid, base_seed, range(reps))
    chunk_size = max(1, math.ceil(reps / (4 * workers)))
    chunks = [range(lo, min(lo + chunk_size, reps)) for lo in range(0, reps, chunk_size)]
    blocks = Parallel(n_jobs=workers)(
        delayed(_ensemble_chunk)(spec, horizon, n, t_grid, base_seed, chunk) for chunk in chunks
    )
    return np.vstack(blocks)


def _simulate_block(
    spec: ModelSpec, N: int, reps: int, rng, record_mdiffs: bool = False
) -> tuple[np.ndarray, np.ndarray | None]:
    """Vectorized cohort of paths sharing one stream (columns k = 1..N).

    Distribution-equivalent to ``reps`` calls of :func:`simulate_path` but
    draws all replicates from a single generator, so it does not honor the
    per-replicate stream contract; use it for moment checks, not ensembles.
    """
    if spec.innovation is None:
        raise MalformedInnovation("simulation needs an innovation distribution")
    gen = _as_generator(rng)
    alphas = spec.alphas
    p = spec.p
    mu = spec.mu_eps
    window = [np.zeros(reps, dtype=np.int64) for _ in range(p)]
    counts = np.empty((reps, N), dtype=np.int64)
    mdiffs = np.empty((reps, N)) if record_mdiffs else None
    for k in range(N):
        xk = np.zeros(reps, dtype=np.int64)
        cond = np.zeros(reps) if record_mdiffs else None
        for i in range(p):
            xk += gen.binomial(window[i], alphas[i])
            if record_mdiffs:
                cond += alphas[i] * window[i]
        xk += spec.innovation.sample(gen, reps)
        if np.any(xk > COUNT_CAP):
            raise HorizonOverflow(f"count exceeded capacity at step {k + 1}")
        counts[:, k] = xk
        if record_mdiffs:
            mdiffs[:, k] = xk - cond - mu
        if p:
            window.insert(0, xk)
            window.pop()
    return counts, mdiffs
