"""Spectral analysis of the INAR(p) companion matrix.

The p-dimensional companion matrix

    A = [[a1, a2, ..., ap],
         [ 1,  0, ...,  0],
         ...
         [ 0, ..., 1,   0]]

encodes the INAR(p) recursion as a vector INAR(1). Its characteristic
polynomial is phi(x) = x^p - a1 x^(p-1) - ... - ap. For ap > 0 the matrix is
irreducible and phi has exactly one positive root rho, the spectral radius,
satisfying sum_k a_k rho^(-k) = 1. When the support gcd is 1 the matrix is
primitive: rho is a simple dominant eigenvalue with explicit left/right
eigenvectors u (coordinates summing to 1) and v (normalized so u.v = 1), and
rho^(-n) A^n converges geometrically to the rank-one projection Pi = u v^T.

Everything here is a pure function of an immutable spec; all routines are
safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModel, NotPrimitive, NumericalError
from .model import ModelSpec, gcd_support

__all__ = [
    "companion",
    "perron_root",
    "perron_vectors",
    "projection",
    "power_weights",
    "char_roots",
    "second_eigen_modulus",
    "operator_norm",
    "SpectralData",
    "spectral_data",
    "ConvergenceProfile",
    "convergence_profile",
]


def _require_support(spec: ModelSpec) -> None:
    if spec.is_degenerate or spec.alphas[-1] <= 0.0:
        raise DegenerateModel("spectral analysis requires a positive leading coefficient")


def companion(spec: ModelSpec) -> np.ndarray:
    """Companion matrix of a canonical spec: coefficients in the first row,
    ones on the subdiagonal, zeros elsewhere."""
    _require_support(spec)
    p = spec.p
    a = np.zeros((p, p))
    a[0, :] = spec.alphas
    if p > 1:
        a[np.arange(1, p), np.arange(0, p - 1)] = 1.0
    return a


def _char_value(spec: ModelSpec, lam: float) -> float:
    """g(lam) = sum_k a_k lam^(-k) - 1, strictly decreasing on (0, inf)."""
    return math.fsum(a * lam ** -(k + 1) for k, a in enumerate(spec.alphas)) - 1.0


def _char_slope(spec: ModelSpec, lam: float) -> float:
    return -math.fsum((k + 1) * a * lam ** -(k + 2) for k, a in enumerate(spec.alphas))


def perron_root(spec: ModelSpec, tol: float = 1e-13) -> float:
    """Unique positive root of the characteristic polynomial.

    Found by bisection on g(x) = sum_k a_k x^(-k) - 1, which is strictly
    decreasing, so the bracket [min(ap^(1/p), 1e-6), 1 + sum(a)] is
    guaranteed to contain the root; a few Newton steps polish the result.
    """
    _require_support(spec)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    p = spec.p
    lo = min(spec.alphas[-1] ** (1.0 / p), 1e-6)
    hi = 1.0 + spec.alpha_sum
    # g(lo) >= 0 since ap lo^-p >= 1; g(hi) < 0 since sum a_k hi^-k <= sum(a)/hi < 1.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _char_value(spec, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, lo):
            break
    rho = 0.5 * (lo + hi)
    for _ in range(4):
        g = _char_value(spec, rho)
        dg = _char_slope(spec, rho)
        if dg == 0.0:
            break
        step = g / dg
        if not math.isfinite(step):
            break
        rho -= step
    if abs(_char_value(spec, rho)) > max(tol, 1e-12):
        raise NumericalError(f"root refinement stalled at residual {_char_value(spec, rho):.3e}")
    return rho


def _phi_prime(spec: ModelSpec, lam: float) -> float:
    """phi'(lam) = p lam^(p-1) - (p-1) a1 lam^(p-2) - ... - a_{p-1}."""
    p = spec.p
    terms = [p * lam ** (p - 1)]
    terms += [-(p - k) * spec.alphas[k - 1] * lam ** (p - k - 1) for k in range(1, p)]
    return math.fsum(terms)


def perron_vectors(spec: ModelSpec, rho: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form dominant eigenvectors (u, v) of a primitive spec.

    u_i = rho^(1-i) / sum_k rho^(1-k)  (right eigenvector, entries sum to 1)
    v_i = (sum_k rho^(1-k) / (rho^(1-p) phi'(rho))) * sum_{l>=i} a_l rho^(i-1-l)

    normalized so that u.v = 1. Imprimitive specs (support gcd >= 2) are
    rejected: the dominant eigenvalue is not simple, so the projection does
    not exist; decompose the model first.
    """
    _require_support(spec)
    if gcd_support(spec) != 1:
        raise NotPrimitive("dominant eigenvectors need a primitive spec; decompose first")
    if rho is None:
        rho = perron_root(spec)
    p = spec.p
    powers = rho ** -(np.arange(p, dtype=float))  # rho^0, rho^-1, ..., rho^(1-p)
    u = powers / math.fsum(powers)
    scale = math.fsum(powers) / (rho ** (1 - p) * _phi_prime(spec, rho))
    alphas = np.asarray(spec.alphas)
    v = np.array(
        [
            scale * math.fsum(alphas[l] * rho ** (i - 2 - l) for l in range(i - 1, p))
            for i in range(1, p + 1)
        ]
    )
    return u, v


def projection(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rank-one projection Pi = u v^T onto the dominant eigenspace."""
    return np.outer(u, v)


def power_weights(spec: ModelSpec, N: int) -> np.ndarray:
    """First-entry weights w_j = e1^T A^j e1 for j = 0..N.

    Satisfies the scalar recurrence w_j = sum_{i<=min(j,p)} a_i w_{j-i} with
    w_0 = 1, which avoids forming matrix powers (O(N p) total). The
    degenerate spec gives w_0 = 1 and zeros afterwards.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    w = np.zeros(N + 1)
    w[0] = 1.0
    alphas = np.asarray(spec.alphas)
    p = spec.p
    for j in range(1, N + 1):
        m = min(j, p)
        if m:
            w[j] = alphas[:m] @ w[j - m : j][::-1]
    return w


def char_roots(spec: ModelSpec, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """All p roots of the characteristic polynomial via Aberth iteration.

    Simultaneous Newton-style refinement from staggered starting points on a
    Cauchy-bound circle; converges to all roots at cubic rate for simple
    roots. Residuals |phi(z)| are verified below ``tol`` relative to the
    leading power before returning.
    """
    _require_support(spec)
    p = spec.p
    coeffs = np.concatenate(([1.0], -np.asarray(spec.alphas)))
    if p == 1:
        return np.array([spec.alphas[0] + 0j])
    deriv = coeffs[:-1] * np.arange(p, 0, -1)
    radius = 1.0 + np.max(np.abs(coeffs[1:]))
    angles = 2.0 * np.pi * np.arange(p) / p + 0.4
    z = radius * np.exp(1j * angles)
    for _ in range(max_iter):
        pv = np.polyval(coeffs, z)
        dv = np.polyval(deriv, z)
        w = np.where(dv != 0.0, pv / np.where(dv != 0.0, dv, 1.0), pv)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        step = np.where(denom != 0.0, w / np.where(denom != 0.0, denom, 1.0), w)
        z = z - step
        scale = np.maximum(1.0, np.abs(z) ** p)
        if np.max(np.abs(np.polyval(coeffs, z)) / scale) < tol:
            break
    scale = np.maximum(1.0, np.abs(z) ** p)
    residual = np.max(np.abs(np.polyval(coeffs, z)) / scale)
    if residual > 1e-10:
        raise NumericalError(f"characteristic roots did not converge (residual {residual:.3e})")
    return z


def second_eigen_modulus(spec: ModelSpec) -> float:
    """Modulus of the second-largest eigenvalue (0 for p = 1 by convention).

    For imprimitive specs several eigenvalues share the dominant modulus, so
    the returned value equals the spectral radius itself.
    """
    _require_support(spec)
    if spec.p == 1:
        return 0.0
    mods = np.sort(np.abs(char_roots(spec)))[::-1]
    return float(mods[1])


def operator_norm(mat: np.ndarray, tol: float = 1e-10, max_iter: int = 10000) -> float:
    """Spectral norm sup_{|x|=1} |Bx| via power iteration on B^T B."""
    mat = np.asarray(mat, dtype=float)
    if mat.size == 0:
        return 0.0
    gram = mat.T @ mat
    n = gram.shape[0]
    v = np.ones(n) + np.arange(n) / max(n, 1)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v_new = w / norm_w
        lam_new = float(v_new @ gram @ v_new)
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return math.sqrt(max(lam_new, 0.0))
        v, lam = v_new, lam_new
    return math.sqrt(max(lam, 0.0))


@dataclass(frozen=True)
class SpectralData:
    """Dominant-eigenstructure bundle for a primitive spec."""

    rho: float
    u: np.ndarray
    v: np.ndarray
    pi: np.ndarray
    lambda2_mod: float
    phi_prime_at_rho: float


def spectral_data(spec: ModelSpec) -> SpectralData:
    """Compute the full dominant-eigenstructure report for a primitive spec."""
    rho = perron_root(spec)
    u, v = perron_vectors(spec, rho)
    return SpectralData(
        rho=rho,
        u=u,
        v=v,
        pi=projection(u, v),
        lambda2_mod=second_eigen_modulus(spec),
        phi_prime_at_rho=_phi_prime(spec, rho),
    )


@dataclass(frozen=True)
class ConvergenceProfile:
    """Observed decay of |rho^(-n) A^n - Pi| with a fitted geometric envelope.

    ``norms[n-1]`` is the operator norm at power n; the fitted pair (c, r)
    satisfies norms[n-1] <= c r^n for every n whose norm is numerically
    resolvable (above the float noise floor; faster-decaying specs bottom
    out near 1e-15 where no geometric envelope can hold). A spec whose
    powers hit the projection exactly (p = 1) yields the degenerate profile
    c = r = 0.
    """

    norms: np.ndarray
    c: float
    r: float


def convergence_profile(spec: ModelSpec, N: int = 40) -> ConvergenceProfile:
    """Measure the geometric convergence of scaled companion powers.

    Dense powers are accumulated iteratively, each rescaled by 1/rho; the
    decay rate r is fitted by log-linear regression over the tail
    n in [N/2, N] (where the second eigenvalue dominates) and the constant c
    is then inflated so the bound holds over the whole range. The fitted r
    tracks lambda2_mod / rho.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    _require_support(spec)
    if gcd_support(spec) != 1:
        raise NotPrimitive("convergence to the projection needs a primitive spec")
    rho = perron_root(spec)
    u, v = perron_vectors(spec, rho)
    pi = projection(u, v)
    a = companion(spec)
    power = np.eye(spec.p)
    norms = np.empty(N)
    for n in range(1, N + 1):
        power = power @ a / rho
        norms[n - 1] = operator_norm(power - pi)
    ns = np.arange(1, N + 1)
    # below this the measured norm is float noise, not geometric decay
    floor = 1e-13 * max(float(np.max(norms)), 1.0)
    usable = norms > floor
    if usable.sum() < 2:
        return ConvergenceProfile(norms=norms, c=0.0, r=0.0)
    tail = usable & (ns >= N // 2)
    if tail.sum() < 2:
        # decay outran float precision before N/2; fit the resolvable tail
        idx = np.flatnonzero(usable)
        tail = np.zeros_like(usable)
        tail[idx[len(idx) // 2 :]] = True
    slope, intercept = np.polyfit(ns[tail], np.log(norms[tail]), 1)
    r = float(np.exp(slope))
    r = min(max(r, 1e-12), 1.0 - 1e-12)
    c = float(np.max(norms[usable] / r ** ns[usable]))
    return ConvergenceProfile(norms=norms, c=c, r=r)
