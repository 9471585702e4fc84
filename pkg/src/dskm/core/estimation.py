"""Per-cell and per-level point-count estimates for one guess ``o`` of the optimal cost.

For every level ``i`` two lambda-wise hashes select sub-streams of the points; a
Storing(G_i, alpha, 1) on the first yields cell estimates ``fhat``, a Storing(G_i, alpha', 1)
on the second yields ``qhat_i``, the estimated number of points in crucial cells of level i.
Heavy/crucial marking is shared with the offline sensitivity estimation.
"""
from __future__ import annotations

from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Iterable, Mapping

from dskm.core.errors import DomainError
from dskm.core.geometry import ROOT_LEVEL, CellId, GridHierarchy, Point
from dskm.core.hashing import KwiseHashBank, derive_seed, field_modulus, point_index, rate_threshold
from dskm.core.parameters import EstimationParams
from dskm.core.storing import SharedStorings, StoringStructure
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import Fail, FailCause, is_fail
from dskm.utils.logger import get_logger

logger = get_logger(__name__)


class ThresholdSchedule:
    """Heaviness thresholds ``T_i(o) = (d / g_i)^2 * o / (100 k)`` and level cut-off gamma."""

    def __init__(self, guess: float, instance: ClusteringInstance):
        if guess <= 0:
            raise DomainError("the guess o must be positive")
        self.guess = float(guess)
        self.instance = instance
        self.gamma = instance.epsilon / (40**2 * instance.levels * instance.d**3)

    def threshold(self, level: int) -> float:
        side = self.instance.side / 2**level
        return (self.instance.d / side) ** 2 * self.guess / (100 * self.instance.k)

    def sensitivity(self, level: int) -> float:
        """s'(p) = 10 d^3 / T_i(o) for points of Q_i."""
        return 10 * self.instance.d**3 / self.threshold(level)


class CellMark(StrEnum):
    HEAVY = "heavy"
    CRUCIAL = "crucial"
    UNMARKED = "unmarked"


class CellMarking:
    """Heavy/crucial marks determined by the set of heavy cells.

    The root is heavy; a cell is crucial when it is not heavy and every ancestor is.
    Cells never reported by an estimator count as estimate 0.
    """

    def __init__(self, grid: GridHierarchy, heavy: Iterable[CellId]):
        self.grid = grid
        self.heavy = frozenset(heavy)

    def __eq__(self, other) -> bool:
        return isinstance(other, CellMarking) and self.heavy == other.heavy

    def __hash__(self) -> int:
        return hash(self.heavy)

    def is_heavy(self, cell: CellId) -> bool:
        return cell.level == ROOT_LEVEL or cell in self.heavy

    def mark(self, cell: CellId) -> CellMark:
        # Cells below a non-heavy ancestor are never examined, whatever their estimate.
        if not all(self.is_heavy(a) for a in self.grid.ancestors(cell)):
            return CellMark.UNMARKED
        return CellMark.HEAVY if self.is_heavy(cell) else CellMark.CRUCIAL

    def crucial_level(self, point: Point) -> int:
        """The level l with ``point`` in Q_l: first level whose cell is not heavy."""
        for cell in self.grid.cells_of(point)[1:]:
            if cell not in self.heavy:
                return cell.level
        return self.grid.instance.levels


def mark_cells(fhat: Mapping[CellId, float], schedule: ThresholdSchedule, grid: GridHierarchy) -> CellMarking:
    """Heavy iff estimate >= T_i(o) on levels 0 .. L-1; level L is never heavy."""
    last = grid.instance.levels
    heavy = [
        cell
        for cell, estimate in fhat.items()
        if 0 <= cell.level < last and estimate >= schedule.threshold(cell.level)
    ]
    return CellMarking(grid, heavy)


@dataclass(frozen=True)
class EstimationOutput:
    qhat: list[float]
    fhat: dict[CellId, float]
    marking: CellMarking


class PointsEstimation:
    """Streaming estimator of cell counts and crucial-level sizes for one guess.

    With a ``shared`` pool, every Storing whose sub-stream is the whole stream comes
    from the pool and is updated by its owner; the rest are fed through one hash bank.
    """

    def __init__(
        self,
        guess: float,
        params: EstimationParams,
        grid: GridHierarchy,
        seed: int,
        shared: SharedStorings | None = None,
    ):
        self.grid = grid
        self.instance = grid.instance
        self.params = params
        self.schedule = ThresholdSchedule(guess, self.instance)
        lam = params.independence
        eps, gamma = params.epsilon, self.schedule.gamma
        storing_delta = params.storing_delta(self.instance)

        self.cell_rates: list[float] = []
        self.level_rates: list[float] = []
        self.cell_storing: list[StoringStructure] = []
        self.level_storing: list[StoringStructure] = []
        self._owned: list[StoringStructure] = []
        owned_rates: list[float] = []
        for level in grid.levels:
            t = self.schedule.threshold(level)
            self.cell_rates.append(min(params.rate_constant * lam / t, 1.0))
            self.level_rates.append(min(params.rate_constant * lam / (eps**2 * gamma * t), 1.0))
            for kind, rate, alpha, target in (
                (1, self.cell_rates[-1], params.alpha, self.cell_storing),
                (3, self.level_rates[-1], params.alpha_prime, self.level_storing),
            ):
                if shared is not None and rate >= 1.0:
                    target.append(shared.get(level, alpha, 1, storing_delta))
                    continue
                storing = StoringStructure(grid, level, alpha, 1, storing_delta, derive_seed(seed, kind, level))
                target.append(storing)
                self._owned.append(storing)
                owned_rates.append(rate)
        self._modulus = field_modulus(self.instance)
        self.hashes = KwiseHashBank.create(lam, owned_rates, derive_seed(seed, 0), self._modulus)

    @property
    def guess(self) -> float:
        return self.schedule.guess

    def update(self, point: Point, sign: int) -> None:
        if not self._owned:
            return
        for r in self.hashes.fired(point_index(point, self.instance)):
            self._owned[r].update(point, 1, sign)

    def _inverse_rate(self, rate: float) -> float:
        threshold = rate_threshold(rate, self._modulus)
        # A zero threshold samples nothing, so every count it scales is 0.
        return self._modulus / threshold if threshold else 1.0

    def cell_scale(self, level: int) -> float:
        """Inverse of the realized sampling rate of the cell sub-stream; 1 while every point is kept."""
        return self._inverse_rate(self.cell_rates[level])

    def level_scale(self, level: int) -> float:
        return self._inverse_rate(self.level_rates[level])

    def query(self) -> EstimationOutput | Fail:
        fhat: dict[CellId, float] = {}
        for level, storing in zip(self.grid.levels, self.cell_storing):
            output = storing.query()
            if is_fail(output):
                logger.debug("estimation o=%g: cell counts of level %d lost", self.guess, level)
                return Fail(cause=FailCause.ESTIMATION, detail=output.detail)
            scale = self.cell_scale(level)
            for cell, count in output.cells.items():
                fhat[cell] = count * scale
        marking = mark_cells(fhat, self.schedule, self.grid)

        qhat: list[float] = []
        for level, storing in zip(self.grid.levels, self.level_storing):
            output = storing.query()
            if is_fail(output):
                logger.debug("estimation o=%g: level %d size lost", self.guess, level)
                return Fail(cause=FailCause.ESTIMATION, detail=output.detail)
            crucial = sum(
                count for cell, count in output.cells.items() if marking.mark(cell) is CellMark.CRUCIAL
            )
            qhat.append(self.level_scale(level) * crucial)
        return EstimationOutput(qhat=qhat, fhat=fhat, marking=marking)

    def state(self) -> tuple:
        return tuple(s.state() for s in self.cell_storing), tuple(s.state() for s in self.level_storing)

    @property
    def nominal_buckets(self) -> int:
        return sum(s.nominal_buckets for s in (*self.cell_storing, *self.level_storing))

    @property
    def allocated_buckets(self) -> int:
        return sum(s.allocated_buckets for s in self._owned)
