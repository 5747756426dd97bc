"""
Deterministic seeded sampling and basic statistics.

Every sampler takes an explicit RngState; there is no module-level
generator. The base generator is PCG32 (XSH-RR output), implemented here
so that a seed yields the same sequence on every platform.
"""
import math
from typing import Callable, Sequence, TypeVar

import numpy as np

from ..exceptions import InvalidParameterError

T = TypeVar("T")

# Above this mean Poisson draws use the rounded Gaussian limit
POISSON_INVERSION_LIMIT = 30.0

_TWO_POW_53 = float(1 << 53)


class RngState:
    """
    PCG32 generator state.

    Single-owner: never share one instance between concurrent tasks.
    Independent streams of the same seed come from distinct ``stream`` ids.
    """

    MULTIPLIER = 6364136223846793005
    MASK_64 = (1 << 64) - 1
    MASK_32 = (1 << 32) - 1

    def __init__(self, seed: int, stream: int = 0):
        """
        Initialize the generator.

        Args:
            seed: 64-bit unsigned seed
            stream: Stream id selecting an independent sequence for the same seed

        Raises:
            InvalidParameterError: If seed or stream is outside [0, 2^64)
        """
        for name, value in (("seed", seed), ("stream", stream)):
            if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= self.MASK_64:
                raise InvalidParameterError(
                    f"{name} must be a 64-bit unsigned integer",
                    context={name: value}
                )

        self.seed = seed
        self.stream = stream
        self.increment = ((stream << 1) | 1) & self.MASK_64
        self._spare_gaussian: float | None = None

        self.state = 0
        self._step()
        self.state = (self.state + seed) & self.MASK_64
        self._step()

    def _step(self) -> None:
        self.state = (self.state * self.MULTIPLIER + self.increment) & self.MASK_64

    def next_u32(self) -> int:
        """Return the next 32-bit unsigned integer and advance the state."""
        old_state = self.state
        self._step()

        xorshifted = (((old_state >> 18) ^ old_state) >> 27) & self.MASK_32
        rot = (old_state >> 59) & 31
        return ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & self.MASK_32

    def next_bounded(self, bound: int) -> int:
        """
        Return an unbiased integer in [0, bound) by rejection sampling.

        Args:
            bound: Exclusive upper bound (must be positive and fit in 32 bits)
        """
        if bound <= 0 or bound > self.MASK_32 + 1:
            raise InvalidParameterError(
                "bound must be in [1, 2^32]",
                context={"bound": bound}
            )
        if bound == 1:
            return 0

        threshold = ((self.MASK_32 + 1) - bound) % bound
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % bound


# ── Samplers ────────────────────────────────────────────────────────────────

def sample_uniform(state: RngState) -> float:
    """Uniform variate in [0, 1) with 53 bits of precision."""
    high = state.next_u32() >> 5
    low = state.next_u32() >> 6
    return (high * 67108864.0 + low) / _TWO_POW_53


def sample_gaussian(state: RngState, mu: float, sigma: float) -> float:
    """
    Gaussian variate by the Marsaglia polar method.

    Values are produced in pairs; the second of each pair is kept on the
    state and returned by the next call. ``sigma == 0`` returns ``mu``
    exactly but still consumes a variate so that stream positions do not
    depend on sigma.

    Raises:
        InvalidParameterError: If sigma is negative or not finite
    """
    if not math.isfinite(sigma) or sigma < 0:
        raise InvalidParameterError(
            "sigma must be a finite non-negative number",
            context={"sigma": sigma}
        )

    if state._spare_gaussian is not None:
        z = state._spare_gaussian
        state._spare_gaussian = None
    else:
        while True:
            u = 2.0 * sample_uniform(state) - 1.0
            v = 2.0 * sample_uniform(state) - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        factor = math.sqrt(-2.0 * math.log(s) / s)
        z = u * factor
        state._spare_gaussian = v * factor

    if sigma == 0:
        return mu
    return mu + sigma * z


def sample_poisson(state: RngState, mu: float) -> int:
    """
    Poisson variate.

    Inversion by sequential search for ``mu <= 30``; above that the
    Gaussian limit N(mu, sqrt(mu)) rounded to the nearest integer and
    clamped at zero.

    Raises:
        InvalidParameterError: If mu is not a finite positive number
    """
    if not math.isfinite(mu) or mu <= 0:
        raise InvalidParameterError(
            "Poisson mean must be a finite positive number",
            context={"mu": mu}
        )

    if mu > POISSON_INVERSION_LIMIT:
        draw = round(sample_gaussian(state, mu, math.sqrt(mu)))
        return max(0, int(draw))

    u = sample_uniform(state)
    k = 0
    pmf = math.exp(-mu)
    cdf = pmf
    # Rounding can leave cdf a hair below 1; stop once the tail is exhausted
    while u > cdf and pmf > 0.0:
        k += 1
        pmf *= mu / k
        cdf += pmf
    return k


def sample_binomial(state: RngState, n: int, p: float) -> int:
    """
    Binomial variate: successes in ``n`` trials of probability ``p``.

    Inversion by sequential search on the smaller of p and 1-p. When the
    zero-count probability underflows (n * min(p, 1-p) in the hundreds)
    the rounded Gaussian limit is used instead, clamped to [0, n].

    Raises:
        InvalidParameterError: If n < 1 or p is outside [0, 1]
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidParameterError(
            "Binomial trial count must be a positive integer",
            context={"n": n}
        )
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError(
            "Binomial probability must lie in [0, 1]",
            context={"p": p}
        )

    if p == 0.0:
        return 0
    if p == 1.0:
        return n

    flipped = p > 0.5
    q = 1.0 - p if flipped else p

    pmf = math.exp(n * math.log1p(-q))
    if pmf > 1e-300:
        u = sample_uniform(state)
        ratio = q / (1.0 - q)
        k = 0
        cdf = pmf
        while u > cdf and k < n:
            pmf *= (n - k) / (k + 1) * ratio
            k += 1
            cdf += pmf
    else:
        draw = round(sample_gaussian(state, n * q, math.sqrt(n * q * (1.0 - q))))
        k = min(n, max(0, int(draw)))

    return n - k if flipped else k


def sample_categorical(state: RngState, weights: Sequence[float]) -> int:
    """
    Index drawn with probability proportional to ``weights``.

    Raises:
        InvalidParameterError: If a weight is negative or all weights are zero
    """
    if any(w < 0 or not math.isfinite(w) for w in weights):
        raise InvalidParameterError(
            "Category weights must be finite and non-negative",
            context={"weights": list(weights)}
        )
    total = math.fsum(weights)
    if total <= 0:
        raise InvalidParameterError(
            "Category weights must have a positive sum",
            context={"weights": list(weights)}
        )

    target = sample_uniform(state) * total
    cumulative = 0.0
    last_positive = 0
    for index, weight in enumerate(weights):
        if weight <= 0:
            continue
        last_positive = index
        cumulative += weight
        if target < cumulative:
            return index
    return last_positive


def shuffled(state: RngState, items: Sequence[T]) -> list[T]:
    """Return a Fisher-Yates shuffled copy of ``items``."""
    result = list(items)
    for i in range(len(result) - 1, 0, -1):
        j = state.next_bounded(i + 1)
        result[i], result[j] = result[j], result[i]
    return result


# ── Basic statistics ────────────────────────────────────────────────────────

def sample_mean(values: Sequence[float]) -> float:
    return float(np.mean(np.asarray(values, dtype=float)))


def sample_variance(values: Sequence[float]) -> float:
    """Unbiased sample variance (n - 1 denominator)."""
    return float(np.var(np.asarray(values, dtype=float), ddof=1))


def sample_sd(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    return math.sqrt(sample_variance(values))


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation; 0.0 when either side has no variance."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size < 2 or xa.std() == 0 or ya.std() == 0:
        return 0.0
    return float(np.corrcoef(xa, ya)[0, 1])


def poisson_pmf(k: int, mu: float) -> float:
    """P(k; mu) = mu^k e^-mu / k!, evaluated in log space."""
    if k < 0:
        return 0.0
    return math.exp(k * math.log(mu) - mu - math.lgamma(k + 1))


def gaussian_cdf(x: float, mu: float, sigma: float) -> float:
    return 0.5 * (1.0 + math.erf((x - mu) / (sigma * math.sqrt(2.0))))


def empirical_pmf(samples: Sequence[int]) -> dict[int, float]:
    """Relative frequency of each observed integer value."""
    values, counts = np.unique(np.asarray(samples, dtype=np.int64), return_counts=True)
    total = counts.sum()
    return {int(v): float(c) / total for v, c in zip(values, counts)}


def total_variation_distance(a: Sequence[int], b: Sequence[int]) -> float:
    """Total variation distance between the empirical PMFs of two samples."""
    pa = empirical_pmf(a)
    pb = empirical_pmf(b)
    support = set(pa) | set(pb)
    return 0.5 * math.fsum(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in support)


def ks_distance(samples: Sequence[float], cdf: Callable[[float], float]) -> float:
    """
    Kolmogorov-Smirnov distance between the empirical CDF of ``samples``
    and a continuous reference ``cdf``.

    Both one-sided gaps are checked at every distinct sample value, so
    discrete samples are measured against the reference just below and at
    each jump.
    """
    data = np.sort(np.asarray(samples, dtype=float))
    n = data.size
    values, counts = np.unique(data, return_counts=True)
    upper = np.cumsum(counts) / n
    lower = upper - counts / n

    distance = 0.0
    for value, below, at in zip(values, lower, upper):
        ref = cdf(float(value))
        distance = max(distance, abs(at - ref), abs(ref - below))
    return float(distance)
