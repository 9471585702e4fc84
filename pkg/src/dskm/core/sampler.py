"""Streaming sensitivity sampling for one guess ``o``.

Every level keeps ``m_hat`` lambda-wise hashes ``h_{i,j}``; an operation on ``p`` is
forwarded to the level's Storing as ``((p, j), sign)`` for each ``j`` with ``h_{i,j}(p) = 1``.
At query time each draw picks a level with probability proportional to its estimated
sensitivity mass, takes the smallest unused label ``j`` that stored some point of ``Q_i``,
and returns one of that label's ``Q_i`` points uniformly. Labels are never reused, so
draws are independent uniform samples of ``Q_i``.

A level whose label rate is 1 hands every point to every label; with a shared pool its
Storing comes from the pool and is updated there once for all guesses.
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from dskm.core.estimation import CellMark, EstimationOutput, PointsEstimation
from dskm.core.geometry import GridHierarchy, Point
from dskm.core.hashing import KwiseHashBank, derive_seed, field_modulus, point_index
from dskm.core.parameters import SamplerParams
from dskm.core.storing import SharedStorings, StoringOutput, StoringStructure
from dskm.models.coreset_models import Coreset, CoresetMetadata, WeightedPoint
from dskm.models.outcome_models import Fail, FailCause, is_fail
from dskm.utils.logger import get_logger

logger = get_logger(__name__)


class SensitivitySampler:
    """Sampling(o, eps, delta) over a dynamic stream."""

    def __init__(
        self,
        guess: float,
        params: SamplerParams,
        grid: GridHierarchy,
        seed: int,
        shared: SharedStorings | None = None,
    ):
        self.grid = grid
        self.instance = grid.instance
        self.params = params
        self.seed = seed
        self.estimation = PointsEstimation(guess, params.estimation, grid, derive_seed(seed, 0), shared=shared)
        self.schedule = self.estimation.schedule
        modulus = field_modulus(self.instance)
        lam = params.estimation.independence
        k, L = self.instance.k, self.instance.levels
        storing_delta = params.storing_delta(self.instance)

        self.label_rates: list[float] = []
        self.storing: list[StoringStructure] = []
        # Row r of a level's bank selects the points stored under label r + 1.
        self.label_banks: dict[int, KwiseHashBank] = {}
        self._owned: list[tuple[KwiseHashBank, StoringStructure]] = []
        self._owned_storing: list[StoringStructure] = []
        for level in grid.levels:
            rate = min(1.0 / (params.label_rate_constant * k * L * self.schedule.threshold(level)), 1.0)
            self.label_rates.append(rate)
            if shared is not None and rate >= 1.0:
                self.storing.append(
                    shared.get(level, params.alpha, params.beta, storing_delta, labels=params.m_hat)
                )
                continue
            storing = StoringStructure(
                grid,
                level,
                params.alpha,
                params.beta,
                storing_delta,
                derive_seed(seed, 2, level),
                max_label=params.m_hat,
            )
            self.storing.append(storing)
            self._owned_storing.append(storing)
            bank = KwiseHashBank.create(lam, [rate] * params.m_hat, derive_seed(seed, 1, level), modulus)
            self.label_banks[level] = bank
            if not bank.idle:
                self._owned.append((bank, storing))

    @property
    def guess(self) -> float:
        return self.schedule.guess

    def update(self, point: Point, sign: int) -> None:
        self.estimation.update(point, sign)
        if not self._owned:
            return
        index = point_index(point, self.instance)
        for bank, storing in self._owned:
            for r in bank.fired(index):
                storing.update(point, int(r) + 1, sign)

    def state(self) -> tuple:
        return self.estimation.state(), tuple(s.state() for s in self.storing)

    # Nominal buckets count every structure the guess reserves; allocated ones only those it owns.
    @property
    def nominal_buckets(self) -> int:
        return self.estimation.nominal_buckets + sum(s.nominal_buckets for s in self.storing)

    @property
    def allocated_buckets(self) -> int:
        return self.estimation.allocated_buckets + sum(s.allocated_buckets for s in self._owned_storing)

    def query(self, seed: int | None = None) -> Coreset | Fail:
        """Draw the coreset; ``seed`` overrides the draw generator's seed."""
        estimate = self.estimation.query()
        if is_fail(estimate):
            return self._fail(estimate.cause, estimate.detail)

        stored: list[StoringOutput] = []
        for level, storing in zip(self.grid.levels, self.storing):
            output = storing.query()
            if is_fail(output):
                return self._fail(FailCause.STORING, output.detail)
            for cell, count in output.cells.items():
                if count > self.params.beta and estimate.marking.mark(cell) is CellMark.CRUCIAL:
                    return self._fail(
                        FailCause.OVERFLOW,
                        f"level {level}: crucial cell {cell.coords} stores {count} > beta={self.params.beta} items",
                    )
            stored.append(output)

        retained = self.retained_levels(estimate)
        masses = [estimate.qhat[i] * self.schedule.sensitivity(i) for i in retained]
        t_prime = float(sum(masses))
        m = self.params.sample_count(t_prime, self.instance)
        metadata = CoresetMetadata(guess=self.guess, t_prime=t_prime, m=m, levels=retained)
        if m == 0:
            return Coreset(metadata=metadata)

        pools = {i: self._label_pools(i, stored[i], estimate) for i in retained}
        cursors = {i: 0 for i in retained}
        cumulative = np.cumsum(masses) / t_prime
        rng = np.random.default_rng(derive_seed(self.seed, 3) if seed is None else seed)

        entries: list[WeightedPoint] = []
        for _ in range(m):
            level = retained[min(int(np.searchsorted(cumulative, rng.random(), side="right")), len(retained) - 1)]
            labels, members = pools[level]
            position = cursors[level]
            if position >= len(labels):
                return self._fail(
                    FailCause.EXHAUSTED_LABELS, f"level {level}: no unused label stores a point of Q_{level}"
                )
            candidates = members[labels[position]]
            point = candidates[int(rng.integers(len(candidates)))]
            cursors[level] = position + 1
            weight = t_prime / (m * self.schedule.sensitivity(level))
            entries.append(WeightedPoint(point=point, weight=weight))
            metadata.draw_levels.append(level)
        return Coreset(entries=entries, metadata=metadata)

    def retained_levels(self, estimate: EstimationOutput) -> list[int]:
        """I = {i : qhat_i >= gamma * T_i(o)}."""
        gamma = self.schedule.gamma
        return [i for i in self.grid.levels if estimate.qhat[i] >= gamma * self.schedule.threshold(i)]

    def _label_pools(self, level, output: StoringOutput, estimate: EstimationOutput):
        """Labels in increasing order, each with its sorted points lying in Q_level."""
        members: dict[int, list[Point]] = defaultdict(list)
        for point, label in output.items:
            if estimate.marking.mark(self.grid.cell_of(point, level)) is CellMark.CRUCIAL:
                members[label].append(point)
        for points in members.values():
            points.sort()
        return sorted(members), members

    def _fail(self, cause: FailCause, detail: str) -> Fail:
        logger.info("sampler o=%g: %s %s", self.guess, cause.value, detail)
        return Fail(cause=cause, detail=detail)
