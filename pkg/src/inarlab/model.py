"""Model specifications for INAR(p) count time series.

An INAR(p) process draws each new count as the sum of binomial thinnings of
the last p counts plus an i.i.d. nonnegative integer innovation:

    X[k] = a1 o X[k-1] + ... + ap o X[k-p] + eps[k]

with coefficients a1..ap in [0, 1]. This module validates and canonicalizes
coefficient vectors, carries the innovation distribution (mean and variance
are all any downstream computation needs), and classifies models as stable,
unstable or explosive according to the sum of the coefficients.

All types are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    AllCoefficientsZero,
    CoefficientOutOfRange,
    MalformedInnovation,
)

__all__ = [
    "Innovation",
    "Poisson",
    "Geometric",
    "NegativeBinomial",
    "Bernoulli",
    "Empirical",
    "ModelSpec",
    "Regime",
    "Classification",
    "validate",
    "gcd_support",
    "classify",
    "decompose",
    "innovation_from_dict",
]

# Absolute tolerance for detecting a unit root in the coefficient sum.
# Coefficients are user inputs, not computed quantities, so an absolute
# tolerance is appropriate.
UNIT_ROOT_TOL = 1e-12


class Innovation:
    """Base class for innovation distributions.

    Subclasses provide ``mean``, ``variance``, ``sample`` and a JSON
    representation. Only a finite second moment is required; the concrete
    families here are convenience plumbing.
    """

    family = "abstract"

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def variance(self) -> float:
        raise NotImplementedError

    def sample(self, rng, size=None):
        """Draw nonnegative integer variates using ``rng`` (a numpy Generator)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Poisson(Innovation):
    """Poisson innovations with rate ``lam`` >= 0."""

    lam: float
    family = "poisson"

    def __post_init__(self):
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise MalformedInnovation(f"poisson rate must be finite and >= 0, got {self.lam}")

    @property
    def mean(self) -> float:
        return self.lam

    @property
    def variance(self) -> float:
        return self.lam

    def sample(self, rng, size=None):
        return rng.poisson(self.lam, size)

    def to_dict(self) -> dict:
        return {"family": "poisson", "lambda": self.lam}


@dataclass(frozen=True)
class Geometric(Innovation):
    """Geometric innovations on {0, 1, 2, ...}.

    ``p`` is the success probability in (0, 1]; the variate counts failures
    before the first success, P(k) = p (1-p)^k, so p = 1 is the point mass
    at zero. The support must include 0 for that boundary to make sense.
    """

    p: float
    family = "geometric"

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0):
            raise MalformedInnovation(f"geometric success probability must be in (0, 1], got {self.p}")

    @property
    def mean(self) -> float:
        return (1.0 - self.p) / self.p

    @property
    def variance(self) -> float:
        return (1.0 - self.p) / self.p**2

    def sample(self, rng, size=None):
        # numpy draws the trial count on {1, 2, ...}
        return rng.geometric(self.p, size) - 1

    def to_dict(self) -> dict:
        return {"family": "geometric", "p": self.p}


@dataclass(frozen=True)
class NegativeBinomial(Innovation):
    """Negative binomial innovations counting failures before the r-th success.

    P(k) = C(k+r-1, k) p^r (1-p)^k with real r > 0 and p in (0, 1).
    """

    r: float
    p: float
    family = "negative_binomial"

    def __post_init__(self):
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise MalformedInnovation(f"negative binomial r must be finite and > 0, got {self.r}")
        if not (0.0 < self.p < 1.0):
            raise MalformedInnovation(f"negative binomial probability must be in (0, 1), got {self.p}")

    @property
    def mean(self) -> float:
        return self.r * (1.0 - self.p) / self.p

    @property
    def variance(self) -> float:
        return self.r * (1.0 - self.p) / self.p**2

    def sample(self, rng, size=None):
        return rng.negative_binomial(self.r, self.p, size)

    def to_dict(self) -> dict:
        return {"family": "negative_binomial", "r": self.r, "p": self.p}


@dataclass(frozen=True)
class Bernoulli(Innovation):
    """Bernoulli innovations with success probability ``p`` in [0, 1]."""

    p: float
    family = "bernoulli"

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise MalformedInnovation(f"bernoulli probability must be in [0, 1], got {self.p}")

    @property
    def mean(self) -> float:
        return self.p

    @property
    def variance(self) -> float:
        return self.p * (1.0 - self.p)

    def sample(self, rng, size=None):
        if size is None:
            return int(rng.random() < self.p)
        import numpy as np

        return (rng.random(size) < self.p).astype(np.int64)

    def to_dict(self) -> dict:
        return {"family": "bernoulli", "p": self.p}


@dataclass(frozen=True)
class Empirical(Innovation):
    """Finite innovation distribution given by an explicit pmf.

    ``pmf`` maps nonnegative integer support points to probabilities that
    must sum to 1 within 1e-12.
    """

    pmf: tuple = field(default=())
    family = "empirical"

    def __init__(self, pmf):
        items = sorted(dict(pmf).items())
        for k, q in items:
            if not (isinstance(k, int) and k >= 0):
                raise MalformedInnovation(f"empirical support must be nonnegative integers, got {k!r}")
            if not (0.0 <= q <= 1.0):
                raise MalformedInnovation(f"empirical probability out of [0, 1]: {q}")
        total = math.fsum(q for _, q in items)
        if abs(total - 1.0) > 1e-12:
            raise MalformedInnovation(f"empirical pmf sums to {total!r}, not 1")
        object.__setattr__(self, "pmf", tuple(items))

    @property
    def mean(self) -> float:
        return math.fsum(k * q for k, q in self.pmf)

    @property
    def variance(self) -> float:
        mu = self.mean
        return math.fsum((k - mu) ** 2 * q for k, q in self.pmf)

    def sample(self, rng, size=None):
        import numpy as np

        support = np.array([k for k, _ in self.pmf], dtype=np.int64)
        cum = np.cumsum([q for _, q in self.pmf])
        cum[-1] = 1.0
        if size is None:
            return int(support[np.searchsorted(cum, rng.random(), side="left")])
        idx = np.searchsorted(cum, rng.random(size), side="left")
        return support[idx]

    def to_dict(self) -> dict:
        return {"family": "empirical", "pmf": {str(k): q for k, q in self.pmf}}


def innovation_from_dict(d: dict) -> Innovation:
    """Build an innovation from its JSON dictionary form."""
    if not isinstance(d, dict) or "family" not in d:
        raise MalformedInnovation(f"innovation block must be a dict with a 'family' key, got {d!r}")
    family = d["family"]
    try:
        if family == "poisson":
            return Poisson(float(d["lambda"]))
        if family == "geometric":
            return Geometric(float(d["p"]))
        if family == "negative_binomial":
            return NegativeBinomial(float(d["r"]), float(d["p"]))
        if family == "bernoulli":
            return Bernoulli(float(d["p"]))
        if family == "empirical":
            return Empirical({int(k): float(v) for k, v in d["pmf"].items()})
    except KeyError as exc:
        raise MalformedInnovation(f"missing innovation parameter: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise MalformedInnovation(str(exc)) from exc
    raise MalformedInnovation(f"unknown innovation family {family!r}")


class Regime(enum.Enum):
    """Stability regime determined by the coefficient sum."""

    STABLE = "stable"
    UNSTABLE = "unstable"
    EXPLOSIVE = "explosive"


@dataclass(frozen=True)
class ModelSpec:
    """Canonical INAR(p) specification.

    ``alphas`` is the canonical coefficient tuple: the last entry is positive
    unless the tuple is empty (the pure-innovation model, accepted with p = 0
    semantics). Construct through :func:`validate`, which performs range
    checks and trims trailing zeros.

    ``innovation`` may be None for workflows that only need the coefficient
    structure (classification, spectral analysis, fitting). Operations that
    need moments or sampling raise :class:`MalformedInnovation` when it is
    missing.
    """

    alphas: tuple
    innovation: Innovation | None = None

    @property
    def p(self) -> int:
        return len(self.alphas)

    @property
    def is_degenerate(self) -> bool:
        """True for the all-zero-coefficient (pure innovation) model."""
        return len(self.alphas) == 0

    @property
    def alpha_sum(self) -> float:
        return math.fsum(self.alphas)

    @property
    def sigma_alpha_sq(self) -> float:
        """Sum of a_i (1 - a_i), the thinning variance aggregate."""
        return math.fsum(a * (1.0 - a) for a in self.alphas)

    @property
    def phi_prime_at_one(self) -> float:
        """Derivative of the characteristic polynomial at 1: sum of i * a_i."""
        return math.fsum((i + 1) * a for i, a in enumerate(self.alphas))

    @property
    def mu_eps(self) -> float:
        self._require_innovation()
        return self.innovation.mean

    @property
    def sigma_eps_sq(self) -> float:
        self._require_innovation()
        return self.innovation.variance

    def _require_innovation(self) -> None:
        if self.innovation is None:
            raise MalformedInnovation("this operation needs an innovation distribution")

    def to_dict(self) -> dict:
        d: dict = {"alphas": list(self.alphas)}
        if self.innovation is not None:
            d["innovation"] = self.innovation.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def from_dict(d: dict) -> "ModelSpec":
        if "alphas" not in d:
            raise CoefficientOutOfRange("spec document requires an 'alphas' array")
        innovation = None
        if d.get("innovation") is not None:
            innovation = innovation_from_dict(d["innovation"])
        return validate(d["alphas"], innovation)

    @staticmethod
    def from_json(text: str) -> "ModelSpec":
        return ModelSpec.from_dict(json.loads(text))


def validate(alphas: Sequence[float], innovation: Innovation | None = None, *, p: int | None = None) -> ModelSpec:
    """Validate raw coefficients and return the canonical spec.

    Trailing zero coefficients are trimmed, so that every downstream
    operation may assume the last coefficient is positive; a model given
    only zero coefficients is accepted as the degenerate pure-innovation
    spec with p = 0 semantics.

    Raises
    ------
    CoefficientOutOfRange
        If any coefficient is outside [0, 1] or ``p`` disagrees with the
        coefficient count.
    MalformedInnovation
        If the innovation block is present but invalid (raised by the
        innovation constructors).
    """
    alphas = tuple(float(a) for a in alphas)
    if p is not None and p != len(alphas):
        raise CoefficientOutOfRange(f"p={p} disagrees with {len(alphas)} coefficients")
    if p is not None and p < 1:
        raise CoefficientOutOfRange("p must be >= 1")
    if not alphas:
        raise CoefficientOutOfRange("at least one coefficient is required")
    for i, a in enumerate(alphas, start=1):
        if not (0.0 <= a <= 1.0) or not math.isfinite(a):
            raise CoefficientOutOfRange(f"alpha_{i}={a} outside [0, 1]")
    last = max((i for i, a in enumerate(alphas, start=1) if a > 0.0), default=0)
    if innovation is not None and not isinstance(innovation, Innovation):
        raise MalformedInnovation(f"not an innovation distribution: {innovation!r}")
    return ModelSpec(alphas=alphas[:last], innovation=innovation)


def gcd_support(spec: ModelSpec) -> int:
    """Greatest common divisor of the lags carrying positive coefficients."""
    support = [i for i, a in enumerate(spec.alphas, start=1) if a > 0.0]
    if not support:
        raise AllCoefficientsZero("gcd of the support is undefined when all coefficients are zero")
    return math.gcd(*support)


@dataclass(frozen=True)
class Classification:
    """Classification report for a canonical spec.

    ``regime`` follows the sign of ``alpha_sum - 1`` (equivalently, the
    position of the Perron root relative to 1). The degenerate model is
    classified stable with ``rho = 0`` and, conventionally, ``d = 1``.
    """

    regime: Regime
    alpha_sum: float
    rho: float
    sigma_alpha_sq: float
    phi_prime_at_one: float
    d: int
    primitive: bool


def classify(spec: ModelSpec) -> Classification:
    """Classify a canonical spec as stable, unstable or explosive."""
    s = spec.alpha_sum
    if spec.is_degenerate:
        return Classification(
            regime=Regime.STABLE,
            alpha_sum=0.0,
            rho=0.0,
            sigma_alpha_sq=0.0,
            phi_prime_at_one=0.0,
            d=1,
            primitive=False,
        )
    from . import spectral

    if abs(s - 1.0) <= UNIT_ROOT_TOL:
        regime = Regime.UNSTABLE
    elif s < 1.0:
        regime = Regime.STABLE
    else:
        regime = Regime.EXPLOSIVE
    d = gcd_support(spec)
    return Classification(
        regime=regime,
        alpha_sum=s,
        rho=spectral.perron_root(spec),
        sigma_alpha_sq=spec.sigma_alpha_sq,
        phi_prime_at_one=spec.phi_prime_at_one,
        d=d,
        primitive=d == 1,
    )


def decompose(spec: ModelSpec) -> list:
    """Split an imprimitive spec into its d identical primitive sub-models.

    When the support gcd is d, the process only references lags d, 2d, ...,
    p, so the d interleaved subsequences evolve as independent primitive
    INAR(p/d) processes with coefficients (a_d, a_2d, ..., a_p). The
    returned sub-specs are identical; independence is a simulation-level
    contract. For d = 1 the list contains the spec itself.
    """
    d = gcd_support(spec)
    if d == 1:
        return [spec]
    sub_alphas = tuple(spec.alphas[i * d - 1] for i in range(1, spec.p // d + 1))
    sub = ModelSpec(alphas=sub_alphas, innovation=spec.innovation)
    return [sub] * d
