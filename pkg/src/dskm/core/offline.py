"""Offline reference side: exact-count sensitivity estimation and sampling, k-means
solvers on small instances, and the coreset verification harness.

The offline estimation shares ``ThresholdSchedule`` and ``mark_cells`` with the streaming
estimator, so streaming ``fhat``/``qhat`` can be injected to replay the sampler's view.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from sklearn.cluster import KMeans, kmeans_plusplus

from dskm.core.errors import DomainError
from dskm.core.estimation import CellMarking, ThresholdSchedule, mark_cells
from dskm.core.geometry import CellId, GridHierarchy, Point, cost, dist2
from dskm.core.hashing import derive_seed
from dskm.models.config_models import VERIFY_FAMILIES
from dskm.models.coreset_models import Coreset, CoresetMetadata, WeightedPoint
from dskm.models.instance_models import ClusteringInstance
from dskm.models.report_models import FamilyResult, OfflineSolution, VerificationReport
from dskm.utils.logger import get_logger

logger = get_logger(__name__)

BRUTE_FORCE_MAX_POINTS = 14
BRUTE_FORCE_MAX_CENTERS = 4
QUANTILES = (0.5, 0.9, 0.99)


def exact_cell_counts(points: Sequence[Point], grid: GridHierarchy) -> dict[CellId, int]:
    """|C ∩ Q| for every non-empty cell of levels 0 .. L."""
    counts: Counter[CellId] = Counter()
    for p in points:
        counts.update(grid.cells_of(p)[1:])
    return dict(counts)


@dataclass(frozen=True)
class SensitivityAssignment:
    """Partition of the live points by crucial level with their sensitivity bounds."""
    schedule: ThresholdSchedule
    marking: CellMarking
    partition: dict[int, list[Point]]
    qhat: list[float]
    retained: list[int]
    sensitivity: dict[Point, float] = field(default_factory=dict)

    @property
    def t_prime(self) -> float:
        return float(sum(self.qhat[i] * self.schedule.sensitivity(i) for i in self.retained))

    def level_sizes(self) -> list[int]:
        return [len(self.partition[i]) for i in sorted(self.partition)]

    def retained_points(self) -> list[Point]:
        """Q^I, the union of Q_i over retained levels."""
        return sorted(p for i in self.retained for p in self.partition[i])

    def total_sensitivity(self) -> float:
        """Sum of s'(p) over every live point."""
        return float(sum(self.sensitivity.values()))


def offline_sensitivity(
    points: Sequence[Point],
    instance: ClusteringInstance,
    guess: float,
    grid: GridHierarchy,
    fhat: Mapping[CellId, float] | None = None,
    qhat: Sequence[float] | None = None,
) -> SensitivityAssignment:
    """Sensitivity estimation with exact counts, or with injected streaming estimates."""
    points = sorted(tuple(int(x) for x in p) for p in points)
    schedule = ThresholdSchedule(guess, instance)
    if fhat is None:
        fhat = exact_cell_counts(points, grid)
    marking = mark_cells(fhat, schedule, grid)

    partition: dict[int, list[Point]] = {level: [] for level in grid.levels}
    sensitivity: dict[Point, float] = {}
    for p in points:
        level = marking.crucial_level(p)
        partition[level].append(p)
        sensitivity[p] = schedule.sensitivity(level)

    if qhat is None:
        qhat = [float(len(partition[level])) for level in grid.levels]
    elif len(qhat) != len(grid.levels):
        raise DomainError(f"expected {len(grid.levels)} level estimates, got {len(qhat)}")
    qhat = [float(q) for q in qhat]
    retained = [i for i in grid.levels if qhat[i] >= schedule.gamma * schedule.threshold(i)]
    return SensitivityAssignment(
        schedule=schedule,
        marking=marking,
        partition=partition,
        qhat=qhat,
        retained=retained,
        sensitivity=sensitivity,
    )


def offline_sample_count(t_prime: float, instance: ClusteringInstance, sample_scale: float = 1.0) -> int:
    """m = ceil(kappa_m * t' eps^-2 L d log t')."""
    if t_prime <= 0.0:
        return 0
    log_term = max(1.0, math.log2(t_prime))
    return math.ceil(sample_scale * t_prime * instance.epsilon**-2 * instance.levels * instance.d * log_term)


def offline_coreset(
    points: Sequence[Point],
    instance: ClusteringInstance,
    guess: float,
    grid: GridHierarchy,
    fhat: Mapping[CellId, float] | None = None,
    qhat: Sequence[float] | None = None,
    sample_scale: float = 1.0,
    seed: int = 0,
    merge: bool = False,
) -> Coreset:
    """Two-stage i.i.d. sensitivity sampling: a level by mass, then a uniform point of it.

    With ``merge`` the draws of one point collapse into a single entry carrying the
    summed weight, which keeps large ``m`` tractable.
    """
    assignment = offline_sensitivity(points, instance, guess, grid, fhat=fhat, qhat=qhat)
    t_prime = assignment.t_prime
    m = offline_sample_count(t_prime, instance, sample_scale)
    retained = assignment.retained
    metadata = CoresetMetadata(guess=guess, t_prime=t_prime, m=m, levels=retained, source="offline")
    if m == 0:
        return Coreset(metadata=metadata)
    for level in retained:
        if not assignment.partition[level]:
            raise DomainError(f"level {level} carries mass but Q_{level} is empty")

    schedule = assignment.schedule
    rng = np.random.default_rng(derive_seed(seed, 4))
    # Point-level probabilities of the two-stage draw.
    candidates: list[tuple[Point, int]] = []
    probs: list[float] = []
    for level in retained:
        members = assignment.partition[level]
        mass = assignment.qhat[level] * schedule.sensitivity(level) / t_prime
        candidates.extend((p, level) for p in members)
        probs.extend([mass / len(members)] * len(members))
    probs_array = np.asarray(probs) / np.sum(probs)

    entries: list[WeightedPoint] = []
    if merge:
        counts = rng.multinomial(m, probs_array)
        for (p, level), c in zip(candidates, counts):
            if c:
                weight = int(c) * t_prime / (m * schedule.sensitivity(level))
                entries.append(WeightedPoint(point=p, weight=weight))
                metadata.draw_levels.append(level)
    else:
        for index in rng.choice(len(candidates), size=m, p=probs_array):
            p, level = candidates[int(index)]
            entries.append(WeightedPoint(point=p, weight=t_prime / (m * schedule.sensitivity(level))))
            metadata.draw_levels.append(level)
    return Coreset(entries=entries, metadata=metadata)


def brute_force_opt(points, k: int) -> OfflineSolution:
    """Exact k-means optimum by branch and bound over restricted-growth partitions."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    n = 0 if X.size == 0 else len(X)
    if n == 0:
        raise DomainError("cannot solve an empty point set")
    if n > BRUTE_FORCE_MAX_POINTS or k > BRUTE_FORCE_MAX_CENTERS:
        raise DomainError(
            f"brute force is limited to n <= {BRUTE_FORCE_MAX_POINTS} and k <= {BRUTE_FORCE_MAX_CENTERS} "
            f"(got n={n}, k={k}); use kmeanspp_lloyd"
        )
    if n <= k:
        return OfflineSolution(centers=[tuple(float(x) for x in p) for p in X], cost=0.0, method="exact")

    rows = [tuple(float(x) for x in p) for p in X]
    counts = [0] * k
    sums = [[0.0] * X.shape[1] for _ in range(k)]
    labels = [0] * n
    best = {"cost": math.inf, "labels": None}

    def increment(block: int, p) -> float:
        c = counts[block]
        if c == 0:
            return 0.0
        return c / (c + 1) * sum((x - s / c) ** 2 for x, s in zip(p, sums[block]))

    def recurse(index: int, used: int, total: float) -> None:
        if total >= best["cost"]:
            return
        if index == n:
            best["cost"], best["labels"] = total, list(labels)
            return
        p = rows[index]
        options = sorted((increment(b, p), b) for b in range(min(used + 1, k)))
        for inc, block in options:
            labels[index] = block
            counts[block] += 1
            for j, x in enumerate(p):
                sums[block][j] += x
            recurse(index + 1, max(used, block + 1), total + inc)
            counts[block] -= 1
            for j, x in enumerate(p):
                sums[block][j] -= x

    recurse(0, 0, 0.0)
    assignment = np.asarray(best["labels"])
    centers = [tuple(X[assignment == b].mean(axis=0)) for b in sorted(set(best["labels"]))]
    return OfflineSolution(centers=centers, cost=cost(X, centers), method="exact")


def kmeanspp_lloyd(points, k: int, restarts: int = 5, seed: int = 0, weights=None) -> OfflineSolution:
    """Best of ``restarts`` seeded k-means++ / Lloyd runs, optionally weighted."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if X.size == 0:
        raise DomainError("cannot solve an empty point set")
    w = None if weights is None else np.asarray(weights, dtype=float)
    support = np.unique(X, axis=0)
    if len(support) <= k:
        centers = [tuple(float(x) for x in p) for p in support]
        return OfflineSolution(centers=centers, cost=0.0, method="heuristic")
    model = KMeans(n_clusters=k, init="k-means++", n_init=max(1, restarts), random_state=seed % 2**32)
    model.fit(X, sample_weight=w)
    centers = [tuple(float(x) for x in c) for c in model.cluster_centers_]
    return OfflineSolution(centers=centers, cost=cost(X, centers, w), method="heuristic")


def optimum(points, k: int, seed: int = 0) -> OfflineSolution:
    """Exact optimum when brute force is feasible, k-means++ / Lloyd otherwise."""
    n = len(points)
    if n <= BRUTE_FORCE_MAX_POINTS and k <= BRUTE_FORCE_MAX_CENTERS:
        return brute_force_opt(points, k)
    return kmeanspp_lloyd(points, k, restarts=10, seed=seed)


class CenterFamilies:
    """Generators of test center sets around a point set Q and a weighted set S."""

    def __init__(self, points, k: int, sample=None, sample_weights=None, seed: int = 0):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        self.k = k
        self.seed = seed
        self.sample = self.points if sample is None else np.atleast_2d(np.asarray(sample, dtype=float))
        self.sample_weights = sample_weights
        if sample_weights is None and sample is None:
            self.sample_weights = np.ones(len(self.points))
        stacked = self.points if not len(self.sample) else np.vstack([self.points, self.sample])
        self.lo = stacked.min(axis=0)
        self.hi = stacked.max(axis=0)
        self.spread = max(float(np.max(self.hi - self.lo)), 1.0)
        self._opt: np.ndarray | None = None

    def generate(self, family: str, count: int) -> list[np.ndarray]:
        if family not in VERIFY_FAMILIES:
            raise DomainError(f"unknown center family {family!r}")
        rng = np.random.default_rng(derive_seed(self.seed, VERIFY_FAMILIES.index(family)))
        make = getattr(self, f"_{family}")
        return [make(rng) for _ in range(count)]

    def _uniform(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lo, self.hi + 1.0, size=(self.k, len(self.lo)))

    def _kmeanspp(self, X, weights, rng) -> np.ndarray:
        support = np.unique(X, axis=0)
        if len(support) < self.k:
            return np.vstack([support, self._uniform(rng)[: self.k - len(support)]])
        centers, _ = kmeans_plusplus(
            X, self.k, sample_weight=weights, random_state=int(rng.integers(2**31))
        )
        return centers

    def _kmeanspp_q(self, rng: np.random.Generator) -> np.ndarray:
        return self._kmeanspp(self.points, None, rng)

    def _kmeanspp_s(self, rng: np.random.Generator) -> np.ndarray:
        if not len(self.sample):
            return self._uniform(rng)
        return self._kmeanspp(self.sample, self.sample_weights, rng)

    def _perturbed_opt(self, rng: np.random.Generator) -> np.ndarray:
        if self._opt is None:
            self._opt = np.asarray(optimum(self.points, self.k, seed=self.seed).centers, dtype=float)
        base = self._opt
        if len(base) < self.k:
            base = np.vstack([base, self._uniform(rng)[: self.k - len(base)]])
        sigma = rng.uniform(0.0, 0.25) * self.spread
        return base + rng.normal(0.0, sigma, size=base.shape)

    def _adversarial(self, rng: np.random.Generator) -> np.ndarray:
        # Centers glued to a few input points leave the rest of Q far away.
        n = len(self.points)
        chosen = rng.choice(n, size=self.k, replace=n < self.k)
        return self.points[chosen] + rng.uniform(-0.5, 0.5, size=(self.k, self.points.shape[1]))


def _quantiles(values: np.ndarray) -> dict[str, float]:
    if not len(values):
        return {f"p{int(q * 100)}": 0.0 for q in QUANTILES}
    return {f"p{int(q * 100)}": float(np.quantile(values, q)) for q in QUANTILES}


def relative_error(cost_q: float, cost_s: float) -> float:
    if cost_q == 0.0:
        return 0.0 if cost_s == 0.0 else math.inf
    return abs(cost_s - cost_q) / cost_q


def verify_coreset(
    points: Sequence[Point],
    coreset: Coreset,
    k: int,
    epsilon: float,
    families: Mapping[str, int],
    seed: int = 0,
) -> VerificationReport:
    """Max relative error |cost(S,Z) - cost(Q,Z)| / cost(Q,Z) over generated center sets."""
    Q = np.array(sorted(tuple(p) for p in points), dtype=float)
    ordered = sorted(coreset.entries, key=lambda e: (e.point, e.weight))
    S = np.array([e.point for e in ordered], dtype=float)
    W = np.array([e.weight for e in ordered], dtype=float)
    if not len(Q):
        max_error = 0.0 if not len(S) else math.inf
        return VerificationReport(epsilon=epsilon, max_error=max_error, quantiles=_quantiles(np.array([])))
    if len(S) and S.shape[1] != Q.shape[1]:
        raise DomainError(f"coreset dimension {S.shape[1]} differs from stream dimension {Q.shape[1]}")

    generator = CenterFamilies(Q, k, sample=S, sample_weights=W if len(S) else None, seed=seed)
    unit = np.ones(len(Q))
    results: list[FamilyResult] = []
    everything: list[float] = []
    for family in VERIFY_FAMILIES:
        count = families.get(family, 0)
        if not count:
            continue
        errors = []
        for Z in generator.generate(family, count):
            cost_s = cost(S, Z, W) if len(S) else 0.0
            errors.append(relative_error(cost(Q, Z, unit), cost_s))
        errors_array = np.asarray(errors)
        results.append(
            FamilyResult(family=family, count=count, max_error=float(errors_array.max()), quantiles=_quantiles(errors_array))
        )
        everything.extend(errors)
    values = np.asarray(everything)
    report = VerificationReport(
        epsilon=epsilon,
        max_error=float(values.max()) if len(values) else 0.0,
        quantiles=_quantiles(values),
        families=results,
        evaluated=len(values),
    )
    logger.debug("verified %d center sets: max error %.4g", report.evaluated, report.max_error)
    return report


def sensitivity_lower_bound(
    points: Sequence[Point],
    point: Point,
    k: int,
    families: Mapping[str, int],
    seed: int = 0,
) -> float:
    """max over sampled Z of dist^2(p, Z) / cost(Q, Z), a lower bound on the sensitivity of p."""
    Q = np.array(sorted(tuple(p) for p in points), dtype=float)
    if tuple(point) not in {tuple(int(x) for x in q) for q in Q}:
        raise DomainError(f"point {tuple(point)} is not a live point")
    generator = CenterFamilies(Q, k, seed=seed)
    best = 0.0
    for family in VERIFY_FAMILIES:
        for Z in generator.generate(family, families.get(family, 0)):
            total = cost(Q, Z)
            if total > 0.0:
                best = max(best, min(dist2(point, z) for z in Z) / total)
    return best
