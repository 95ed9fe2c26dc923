"""Product measure of an upper set and its critical probability.

mu(F, p) is the probability that a p-random subset (each ground element
kept independently with probability p) lies in F. Exact evaluation goes
through instance-level integer profiles computed once and cached:

* enumeration: counts of members of F by cardinality over all 2^n subsets,
  so mu(p) = sum_k N_k p^k (1-p)^(n-k);
* inclusion_exclusion: signed integer coefficients c_j over unions of
  minimal-element subsets, so mu(p) = sum_j c_j p^j. Grouping the 2^|F0|
  signed terms by union size keeps the cancellation in exact integers.

Both evaluate with a fixed summation order (ascending exponent, fsum), so
results are reproducible bit for bit. Monte Carlo uses numpy's PCG64
generator; identical (seed, samples) gives identical estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import UpperSet
from .errors import MissingMcParams, NonConvergence, SizeLimitExceeded

ENUMERATION_GROUND_CAP = 24
INCLUSION_EXCLUSION_MINIMALS_CAP = 24

EXACT_METHODS = ("enumeration", "inclusion_exclusion")
METHODS = EXACT_METHODS + ("monte_carlo",)


@dataclass(frozen=True)
class MuEstimate:
    value: float
    std_error: float
    method: str
    samples: int


@dataclass(frozen=True)
class CriticalProbability:
    p_c: float
    residual: float
    tolerance: float


@lru_cache(maxsize=1024)
def _enumeration_profile(upper: UpperSet) -> tuple[int, ...]:
    """N_k = number of members of F with exactly k elements, k = 0..n."""
    n = upper.ground_size
    if n > ENUMERATION_GROUND_CAP:
        raise SizeLimitExceeded(
            f"enumeration needs ground_size <= {ENUMERATION_GROUND_CAP}, got {n}"
        )
    subs = np.arange(1 << n, dtype=np.uint32)
    member = np.zeros(1 << n, dtype=bool)
    for m in upper.minimal_bits:
        mm = np.uint32(m)
        member |= (subs & mm) == mm
    sizes = np.bitwise_count(subs[member]).astype(np.int64)
    counts = np.bincount(sizes, minlength=n + 1)
    return tuple(int(c) for c in counts)


@lru_cache(maxsize=1024)
def _inclusion_exclusion_coeffs(upper: UpperSet) -> tuple[int, ...]:
    """c_j with mu(p) = sum_j c_j p^j, from signed union-size counts."""
    m = len(upper.minimals)
    if m > INCLUSION_EXCLUSION_MINIMALS_CAP:
        raise SizeLimitExceeded(
            f"inclusion-exclusion needs |F0| <= {INCLUSION_EXCLUSION_MINIMALS_CAP}, got {m}"
        )
    n = upper.ground_size
    unions = np.zeros(1 << m, dtype=np.uint32)
    for i, bits in enumerate(upper.minimal_bits):
        unions[1 << i : 1 << (i + 1)] = unions[: 1 << i] | np.uint32(bits)
    union_sizes = np.bitwise_count(unions).astype(np.int64)
    parity = np.bitwise_count(np.arange(1 << m, dtype=np.uint32)) & 1
    odd = np.bincount(union_sizes[parity == 1], minlength=n + 1)
    even = np.bincount(union_sizes[1:][parity[1:] == 0], minlength=n + 1)
    return tuple(int(a - b) for a, b in zip(odd, even))


def _eval_enumeration(profile: tuple[int, ...], n: int, p: float) -> float:
    q = 1.0 - p
    return math.fsum(c * p**k * q ** (n - k) for k, c in enumerate(profile) if c)


def _eval_inclusion_exclusion(coeffs: tuple[int, ...], p: float) -> float:
    return math.fsum(c * p**j for j, c in enumerate(coeffs) if c)


def mu(
    upper: UpperSet,
    p: float,
    method: str = "enumeration",
    *,
    samples: int | None = None,
    seed: int | None = None,
) -> MuEstimate:
    """Measure of F under the p-biased product measure.

    Exact methods return std_error 0; monte_carlo reports the hit fraction
    over ``samples`` seeded draws with its binomial standard error.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if method == "enumeration":
        profile = _enumeration_profile(upper)
        value = _eval_enumeration(profile, upper.ground_size, p)
        return MuEstimate(min(max(value, 0.0), 1.0), 0.0, method, 0)
    if method == "inclusion_exclusion":
        coeffs = _inclusion_exclusion_coeffs(upper)
        value = _eval_inclusion_exclusion(coeffs, p)
        return MuEstimate(min(max(value, 0.0), 1.0), 0.0, method, 0)
    if method == "monte_carlo":
        if samples is None or seed is None:
            raise MissingMcParams("monte_carlo needs samples and seed")
        if samples < 1:
            raise MissingMcParams(f"samples must be >= 1, got {samples}")
        return _mu_monte_carlo(upper, p, samples, seed)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _mu_monte_carlo(upper: UpperSet, p: float, samples: int, seed: int) -> MuEstimate:
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random((samples, upper.ground_size)) < p
    hits = np.zeros(samples, dtype=bool)
    for m in upper.minimals:
        idx = list(m.indices())
        hits |= draws[:, idx].all(axis=1)
    value = float(hits.sum()) / samples
    std_error = math.sqrt(value * (1.0 - value) / samples)
    return MuEstimate(value, std_error, "monte_carlo", samples)


def critical_probability(
    upper: UpperSet,
    tol: float = 1e-9,
    method: str = "enumeration",
) -> CriticalProbability:
    """The unique p with mu_p(F) = 1/2, located by bisection.

    mu_p is strictly increasing in p for a nontrivial upper set, so the
    bracket [0, 1] always contains exactly one crossing. Iteration continues
    past bracket width <= tol until the residual |mu - 1/2| also drops
    under tol (the crossing can be steep).
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if method not in EXACT_METHODS:
        raise ValueError(f"critical_probability needs an exact method, got {method!r}")

    if method == "enumeration":
        profile = _enumeration_profile(upper)
        n = upper.ground_size
        evaluate = lambda p: _eval_enumeration(profile, n, p)
    else:
        coeffs = _inclusion_exclusion_coeffs(upper)
        evaluate = lambda p: _eval_inclusion_exclusion(coeffs, p)

    # The returned point is always the last evaluated midpoint, so the
    # reported residual is the residual of p_c itself. Once the bracket is
    # below tol, further halving keeps shrinking the midpoint's residual,
    # which matters when mu crosses 1/2 steeply.
    lo, hi = 0.0, 1.0
    p_c, residual = 0.5, 0.5
    max_iter = 200
    for _ in range(max_iter):
        p_c = 0.5 * (lo + hi)
        value = evaluate(p_c)
        residual = abs(value - 0.5)
        if (hi - lo <= tol and residual <= tol) or hi - lo < 1e-17:
            break
        if value < 0.5:
            lo = p_c
        else:
            hi = p_c
    if residual > 10 * tol:
        raise NonConvergence(
            f"residual {residual:.3e} exceeds 10*tol after {max_iter} iterations; "
            "the measure implementation looks broken"
        )
    return CriticalProbability(p_c, residual, tol)


def clear_caches() -> None:
    """Drop cached instance profiles (used by determinism tests)."""
    _enumeration_profile.cache_clear()
    _inclusion_exclusion_coeffs.cache_clear()
