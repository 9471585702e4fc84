"""DynamicCoreset: the small-instance shortcut plus one sampler per guess ``o_u``.

All samplers share one grid shift. The master seed is split into the grid seed
``(0,)``, the shortcut seed ``(1,)``, per-guess seeds ``(2, u)`` and the seed ``(3,)``
of the pool holding Storing structures that see every point, shared across guesses.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from dskm.core.geometry import GridHierarchy, Point
from dskm.core.hashing import derive_seed, index_point, point_index
from dskm.core.parameters import DriverParams, guesses
from dskm.core.sampler import SensitivitySampler
from dskm.core.sketch import DistinctSketch
from dskm.core.storing import SharedStorings
from dskm.models.config_models import ScaleConfig
from dskm.models.coreset_models import Coreset
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import Fail, FailCause, is_fail
from dskm.models.report_models import GuessOutcome, GuessStatus, QueryReport, SpaceReport
from dskm.utils.logger import get_logger

logger = get_logger(__name__)


class DynamicCoreset:
    """Single-pass coreset construction over a dynamic stream of grid points."""

    def __init__(
        self,
        instance: ClusteringInstance,
        seed: int = 0,
        scale: ScaleConfig | None = None,
        params: DriverParams | None = None,
        workers: int = 1,
    ):
        if params is None:
            params = DriverParams.derive(instance, scale or ScaleConfig())
        self.instance = instance
        self.seed = seed
        self.params = params
        self.workers = max(1, workers)
        self.grid = GridHierarchy.random(instance, derive_seed(seed, 0))
        self.shortcut = DistinctSketch(
            params.shortcut_capacity,
            params.shortcut_delta,
            derive_seed(seed, 1),
            domain=instance.domain_size,
        )
        self.shared = SharedStorings(self.grid, derive_seed(seed, 3))
        self.samplers: dict[int, SensitivitySampler] = {
            u: SensitivitySampler(o, params.sampler, self.grid, derive_seed(seed, 2, u), shared=self.shared)
            for u, o in guesses(instance)
        }
        self.operations = 0
        logger.debug(
            "driver %r: %d guesses, %d shared storings, shortcut capacity %d, size threshold %d",
            self.grid,
            len(self.samplers),
            len(self.shared),
            params.shortcut_capacity,
            params.size_threshold,
        )

    @property
    def size_threshold(self) -> int:
        return self.params.size_threshold

    def update(self, point: Point, sign: int) -> None:
        point = tuple(int(x) for x in point)
        self.shortcut.update(point_index(point, self.instance), sign)
        self.shared.update(point, sign)
        for sampler in self.samplers.values():
            sampler.update(point, sign)
        self.operations += 1

    def extend(self, operations) -> None:
        """Feed ``(sign, point)`` pairs in stream order."""
        for sign, point in operations:
            self.update(point, sign)

    def query(self) -> Coreset | Fail:
        return self.query_report().result

    def query_report(self, all_guesses: bool = False) -> QueryReport:
        """Run the selection rule and keep every per-guess outcome.

        Guesses are only queried when the shortcut fails, unless ``all_guesses`` is set.
        """
        exact = self.shortcut.query()
        if not is_fail(exact):
            points = [index_point(index, self.instance) for index in exact]
            logger.info("shortcut recovered %d live points", len(points))
            outcomes = self._query_guesses()[0] if all_guesses else []
            return QueryReport(
                shortcut=True, outcomes=outcomes, result=Coreset.unit_weight(points, source="shortcut")
            )

        outcomes, coresets = self._query_guesses()
        selected = next((o for o in outcomes if o.status is GuessStatus.OK), None)
        if selected is None:
            causes = {o.u: o.cause or o.status.value for o in outcomes}
            logger.info("no viable guess among %d", len(outcomes))
            fail = Fail(
                cause=FailCause.NO_VIABLE_GUESS,
                detail=f"all {len(outcomes)} guesses failed or exceeded h={self.size_threshold}",
                guess_causes=causes,
            )
            return QueryReport(shortcut=False, outcomes=outcomes, result=fail)
        return QueryReport(shortcut=False, selected=selected.u, outcomes=outcomes, result=coresets[selected.u])

    def space_report(self) -> SpaceReport:
        per_guess = {
            u: (s.nominal_buckets, s.allocated_buckets) for u, s in self.samplers.items()
        }
        return SpaceReport(
            shortcut_nominal=self.shortcut.nominal_buckets,
            shortcut_allocated=self.shortcut.allocated_buckets,
            shared_nominal=self.shared.nominal_buckets,
            shared_allocated=self.shared.allocated_buckets,
            per_guess_nominal={u: n for u, (n, _) in per_guess.items()},
            per_guess_allocated={u: a for u, (_, a) in per_guess.items()},
        )

    def _query_guesses(self) -> tuple[list[GuessOutcome], dict[int, Coreset]]:
        # Results are collected in increasing u whatever the pool size.
        items = sorted(self.samplers.items())
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda item: item[1].query(), items))
        else:
            results = [sampler.query() for _, sampler in items]

        coresets: dict[int, Coreset] = {}
        outcomes = []
        for (u, sampler), result in zip(items, results):
            if is_fail(result):
                outcome = GuessOutcome(u=u, guess=sampler.guess, status=GuessStatus.FAIL, cause=result.cause.value)
            elif len(result) > self.size_threshold:
                outcome = GuessOutcome(u=u, guess=sampler.guess, status=GuessStatus.OVERSIZED, size=len(result))
            else:
                coresets[u] = result
                outcome = GuessOutcome(u=u, guess=sampler.guess, status=GuessStatus.OK, size=len(result))
            outcomes.append(outcome)
        return outcomes, coresets
