"""Hash families over the point domain.

``KwiseHash`` is a degree-(lambda-1) polynomial over a prime field larger than Delta^d,
thresholded into a Bernoulli bit; ``KwiseHashBank`` evaluates many of them on one point
with a single matrix product. ``PairwiseHash`` is the Carter-Wegman map
``((a x + b) mod (2^61 - 1)) mod size`` used for cell buckets and sketch rows.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from dskm.core.errors import DomainError
from dskm.models.instance_models import ClusteringInstance

MERSENNE_61 = (1 << 61) - 1
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def derive_seed(seed: int, *path: int) -> int:
    """Independent 63-bit sub-seed for the component addressed by ``path``."""
    sequence = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def point_index(point: Sequence[int], instance: ClusteringInstance) -> int:
    """Mixed-radix encoding of ``[1, Delta]^d`` onto ``[0, Delta^d)``."""
    if not instance.contains(point):
        raise DomainError(f"point {tuple(point)} outside [1, {instance.side}]^{instance.d}")
    index = 0
    for x in reversed(point):
        index = index * instance.side + (x - 1)
    return index


def index_point(index: int, instance: ClusteringInstance) -> tuple[int, ...]:
    if not 0 <= index < instance.domain_size:
        raise DomainError(f"index {index} outside [0, {instance.domain_size})")
    coords = []
    for _ in range(instance.d):
        index, r = divmod(index, instance.side)
        coords.append(r + 1)
    return tuple(coords)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    candidate = n + 1
    while not is_prime(candidate):
        candidate += 1
    return candidate


@lru_cache(maxsize=64)
def field_modulus(instance: ClusteringInstance) -> int:
    """The prime field the point hashes of ``instance`` live in."""
    if instance.domain_size >= MERSENNE_61:
        raise DomainError("Delta^d must stay below 2^61 - 1")
    return next_prime(instance.domain_size)


def default_independence(instance: ClusteringInstance, delta: float, scale: float = 1.0) -> int:
    """lambda = 10 * ceil(dL + log2(1/delta) + 1), scaled, rounded up to an even number >= 2."""
    base = 10 * math.ceil(instance.d * instance.levels + math.log2(1.0 / delta) + 1)
    lam = max(2, math.ceil(scale * base))
    return lam + (lam % 2)


def rate_threshold(prob: float, modulus: int) -> int:
    """Threshold whose realized rate ``threshold / modulus`` is nearest to ``prob``."""
    return min(modulus, round(prob * modulus))


class KwiseHash:
    """lambda-wise independent Bernoulli hash ``x -> [poly(x) mod P < threshold]``."""

    __slots__ = ("independence", "coefficients", "modulus", "threshold")

    def __init__(self, coefficients: Sequence[int], modulus: int, threshold: int):
        if len(coefficients) < 2 or len(coefficients) % 2:
            raise DomainError("independence must be an even integer >= 2")
        if not 0 <= threshold <= modulus:
            raise DomainError("threshold must lie in [0, modulus]")
        self.independence = len(coefficients)
        self.coefficients = tuple(int(c) % modulus for c in coefficients)
        self.modulus = modulus
        self.threshold = threshold

    @classmethod
    def create(cls, independence: int, prob: float, seed: int, modulus: int) -> "KwiseHash":
        """Fresh hash with target rate ``prob``, seeded deterministically."""
        if independence < 2 or independence % 2:
            raise DomainError(f"independence {independence} must be an even integer >= 2")
        if not 0.0 < prob <= 1.0:
            raise DomainError(f"probability {prob} outside (0, 1]")
        if not 2 <= modulus < 1 << 63:
            raise DomainError("modulus must lie in [2, 2^63)")
        rng = np.random.default_rng(seed)
        coefficients = [int(c) for c in rng.integers(0, modulus, size=independence, dtype=np.int64)]
        return cls(coefficients, modulus, rate_threshold(prob, modulus))

    @property
    def rate(self) -> float:
        """Realized Bernoulli rate ``threshold / modulus``."""
        return self.threshold / self.modulus

    @property
    def always(self) -> bool:
        return self.threshold >= self.modulus

    def value(self, x: int) -> int:
        acc = 0
        for c in self.coefficients:
            acc = (acc * x + c) % self.modulus
        return acc

    def __call__(self, x: int) -> int:
        if self.always:
            return 1
        if self.threshold == 0:
            return 0
        return int(self.value(x) < self.threshold)

    def __eq__(self, other) -> bool:
        return isinstance(other, KwiseHash) and (
            self.coefficients, self.modulus, self.threshold
        ) == (other.coefficients, other.modulus, other.threshold)

    def __hash__(self) -> int:
        return hash((self.coefficients, self.modulus, self.threshold))


class KwiseHashBank:
    """Independent lambda-wise Bernoulli hashes evaluated together on one point.

    Row ``r`` fires on ``x`` when ``poly_r(x) mod P < thresholds[r]``, exactly as
    ``row(r)(x)`` does. The powers of ``x`` are formed once and the polynomials of all
    rows whose threshold lies strictly between 0 and ``P`` are reduced from one matrix
    product: in int64 while ``lambda * P^2`` fits, over Python integers otherwise.
    """

    def __init__(self, coefficients, modulus: int, thresholds: Sequence[int]):
        coefficients = np.asarray(coefficients, dtype=np.int64)
        thresholds = np.asarray(thresholds, dtype=np.int64)
        if coefficients.ndim != 2 or coefficients.shape[0] != len(thresholds):
            raise DomainError("expected one coefficient row per threshold")
        independence = coefficients.shape[1]
        if independence < 2 or independence % 2:
            raise DomainError("independence must be an even integer >= 2")
        if np.any(thresholds < 0) or np.any(thresholds > modulus):
            raise DomainError("thresholds must lie in [0, modulus]")
        self.independence = independence
        self.modulus = modulus
        self.coefficients = coefficients % modulus
        self.thresholds = thresholds
        self._always = thresholds >= modulus
        self._live = np.flatnonzero((thresholds > 0) & (thresholds < modulus))
        self._live_thresholds = thresholds[self._live]
        self._exact = independence * (modulus - 1) ** 2 < 1 << 63
        live = self.coefficients[self._live]
        self._matrix = live if self._exact else live.astype(object)

    @classmethod
    def create(cls, independence: int, probs: Sequence[float], seed: int, modulus: int) -> "KwiseHashBank":
        """One row per entry of ``probs``, every row drawn from one seeded generator."""
        if independence < 2 or independence % 2:
            raise DomainError(f"independence {independence} must be an even integer >= 2")
        if any(not 0.0 < p <= 1.0 for p in probs):
            raise DomainError("every probability must lie in (0, 1]")
        if not 2 <= modulus < 1 << 63:
            raise DomainError("modulus must lie in [2, 2^63)")
        rng = np.random.default_rng(seed)
        coefficients = rng.integers(0, modulus, size=(len(probs), independence), dtype=np.int64)
        return cls(coefficients, modulus, [rate_threshold(p, modulus) for p in probs])

    def __len__(self) -> int:
        return len(self.thresholds)

    @property
    def idle(self) -> bool:
        """True when no row can ever fire."""
        return not self._live.size and not self._always.any()

    def row(self, r: int) -> KwiseHash:
        return KwiseHash(self.coefficients[r].tolist(), self.modulus, int(self.thresholds[r]))

    def fires(self, x: int) -> np.ndarray:
        """Boolean vector of ``row(r)(x)`` over every row."""
        out = self._always.copy()
        if self._live.size:
            out[self._live] = self._values(x) < self._live_thresholds
        return out

    def fired(self, x: int) -> np.ndarray:
        """Indices of the rows firing on ``x``, ascending."""
        return np.flatnonzero(self.fires(x))

    def _values(self, x: int) -> np.ndarray:
        powers = [1] * self.independence
        x %= self.modulus
        for t in range(self.independence - 2, -1, -1):
            powers[t] = powers[t + 1] * x % self.modulus
        if self._exact:
            return (self._matrix @ np.array(powers, dtype=np.int64)) % self.modulus
        return self._matrix.dot(np.array(powers, dtype=object)) % self.modulus


class PairwiseHash:
    """Pairwise-independent map of integers below 2^61 - 1 into ``[0, size)``."""

    __slots__ = ("size", "a", "b")

    def __init__(self, size: int | None, a: int, b: int):
        if size is not None and size < 1:
            raise DomainError("hash range must be >= 1")
        self.size = size
        self.a = a
        self.b = b

    @classmethod
    def create(cls, size: int | None, seed: int) -> "PairwiseHash":
        rng = np.random.default_rng(seed)
        a = int(rng.integers(1, MERSENNE_61, dtype=np.int64))
        b = int(rng.integers(0, MERSENNE_61, dtype=np.int64))
        return cls(size, a, b)

    @classmethod
    def family(cls, size: int | None, count: int, seed: int) -> list[PairwiseHash]:
        """``count`` independent hashes drawn from one generator."""
        rng = np.random.default_rng(seed)
        a = rng.integers(1, MERSENNE_61, size=count, dtype=np.int64)
        b = rng.integers(0, MERSENNE_61, size=count, dtype=np.int64)
        return [cls(size, int(x), int(y)) for x, y in zip(a, b)]

    def __call__(self, x: int) -> int:
        value = (self.a * x + self.b) % MERSENNE_61
        return value if self.size is None else value % self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, PairwiseHash) and (self.size, self.a, self.b) == (other.size, other.a, other.b)

    def __hash__(self) -> int:
        return hash((self.size, self.a, self.b))
