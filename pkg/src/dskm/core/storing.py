"""Point-cell storing structure over one grid level.

A Distinct(alpha, delta/4) sketch over cells recovers every non-empty cell with its count.
Beside it run ``r * 2 alpha`` Distinct(beta, delta/(2 alpha)) copies indexed by
``(j, h_j(cell))``; a cell holding at most ``beta`` items is read back from any row ``j``
where it does not share its bucket with another recovered cell. The copies share one
row-hash layout, so an item is located once per update whatever the number of rows.

Items are ``(point, label)`` pairs encoded as ``label * Delta^d + point_index``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from dskm.core.errors import DomainError
from dskm.core.geometry import CellId, GridHierarchy, Point
from dskm.core.hashing import MERSENNE_61, PairwiseHash, derive_seed, index_point, point_index
from dskm.core.sketch import DistinctSketch, SketchHashes
from dskm.models.outcome_models import Fail, FailCause, is_fail
from dskm.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class StoringOutput:
    """Recovered cells with their counts, and the items of every cell with count <= beta."""
    cells: dict[CellId, int] = field(default_factory=dict)
    items: frozenset[tuple[Point, int]] = frozenset()


class StoringStructure:
    """Storing(G_i, alpha, beta, delta) fed with ``((point, label), sign)`` operations."""

    def __init__(
        self,
        grid: GridHierarchy,
        level: int,
        alpha: int,
        beta: int,
        delta: float,
        seed: int,
        max_label: int = 1,
    ):
        if alpha < 1 or beta < 1:
            raise DomainError("alpha and beta must be >= 1")
        if not 0.0 < delta < 0.5:
            raise DomainError(f"failure budget {delta} outside (0, 1/2)")
        if max_label < 1:
            raise DomainError("max_label must be >= 1")
        self.grid = grid
        self.level = level
        self.alpha = alpha
        self.beta = beta
        self.delta = delta
        self.seed = seed
        self.max_label = max_label
        self.item_domain = (max_label + 1) * grid.instance.domain_size
        if self.item_domain > MERSENNE_61:
            raise DomainError("(point, label) encoding exceeds the 2^61 - 1 item domain")
        grid.side_length(level)

        self.rows = math.ceil(math.log2(4 * alpha / delta))
        self.copy_delta = delta / (2 * alpha)
        self.copy_rows = math.ceil(math.log2(beta / self.copy_delta)) + 2
        self.cell_sketch = DistinctSketch(alpha, delta / 4, derive_seed(seed, 0), domain=grid.cell_domain)
        self.cell_hashes = PairwiseHash.family(2 * alpha, self.rows, derive_seed(seed, 1))
        self.copy_hashes = SketchHashes(2 * beta, self.copy_rows, derive_seed(seed, 2))
        self._copies: dict[tuple[int, int], DistinctSketch] = {}
        self._version = 0
        self._answer: tuple[int, StoringOutput | Fail] | None = None
        logger.debug(
            "storing level=%d alpha=%d beta=%d rows=%d delta=%.3g", level, alpha, beta, self.rows, delta
        )

    def encode_item(self, point: Point, label: int) -> int:
        if not 1 <= label <= self.max_label:
            raise DomainError(f"label {label} outside [1, {self.max_label}]")
        return label * self.grid.instance.domain_size + point_index(point, self.grid.instance)

    def decode_item(self, item: int) -> tuple[Point, int]:
        label, index = divmod(item, self.grid.instance.domain_size)
        return index_point(index, self.grid.instance), label

    def update(self, point: Point, label: int, sign: int) -> None:
        key = self.grid.encode_cell(self.grid.cell_of(point, self.level))
        item = self.encode_item(point, label)
        self.cell_sketch.update(key, sign)
        buckets, phi = self.copy_hashes.locate(item)
        for j, h in enumerate(self.cell_hashes):
            self._copy(j, h(key)).update_located(item, sign, buckets, phi)
        self._version += 1

    def query(self) -> StoringOutput | Fail:
        """Decode the structure; the answer is reused until the next update."""
        answer = self._answer
        if answer is not None and answer[0] == self._version:
            return answer[1]
        version = self._version
        result = self._decode()
        self._answer = (version, result)
        return result

    def _decode(self) -> StoringOutput | Fail:
        decoded = self.cell_sketch.query()
        if is_fail(decoded):
            return Fail(cause=FailCause.STORING, detail=f"level {self.level} cells: {decoded.detail}")
        buckets = {key: [h(key) for h in self.cell_hashes] for key in decoded}
        occupancy = [Counter(b[j] for b in buckets.values()) for j in range(self.rows)]

        cells: dict[CellId, int] = {}
        items: set[tuple[Point, int]] = set()
        for key, count in decoded.items():
            cell = self.grid.decode_cell(key, self.level)
            cells[cell] = count
            if count > self.beta:
                continue
            recovered = self._recover_cell(cell, count, buckets[key], occupancy)
            if is_fail(recovered):
                return recovered
            items.update(recovered)
        return StoringOutput(cells=cells, items=frozenset(items))

    def _recover_cell(self, cell, count, cell_buckets, occupancy) -> list[tuple[Point, int]] | Fail:
        # Smallest qualifying row wins.
        for j, b in enumerate(cell_buckets):
            if occupancy[j][b] != 1:
                continue
            copy = self._copies.get((j, b))
            content = copy.query() if copy is not None else {}
            if is_fail(content):
                continue
            found = [self.decode_item(item) for item in content]
            if sum(content.values()) != count or any(
                self.grid.cell_of(p, self.level) != cell for p, _ in found
            ):
                return Fail(
                    cause=FailCause.STORING_DISAGREEMENT,
                    detail=f"level {self.level}: row {j} disagrees with the cell count of {cell.coords}",
                )
            return found
        return Fail(
            cause=FailCause.STORING,
            detail=f"level {self.level}: no collision-free row decodes cell {cell.coords}",
        )

    def state(self) -> tuple:
        copies = tuple(
            (slot, sketch.state()) for slot, sketch in sorted(self._copies.items()) if not sketch.is_empty()
        )
        return self.cell_sketch.state(), copies

    @property
    def nominal_buckets(self) -> int:
        return self.cell_sketch.nominal_buckets + self.rows * 2 * self.alpha * self.copy_rows * 2 * self.beta

    @property
    def allocated_buckets(self) -> int:
        return self.cell_sketch.allocated_buckets + sum(s.allocated_buckets for s in self._copies.values())

    def _copy(self, j: int, b: int) -> DistinctSketch:
        copy = self._copies.get((j, b))
        if copy is None:
            copy = DistinctSketch(
                self.beta, self.copy_delta, self.seed, domain=self.item_domain, hashes=self.copy_hashes
            )
            self._copies[(j, b)] = copy
        return copy


class SharedStorings:
    """Storing structures that receive every operation under labels ``1 .. labels``.

    Such a structure holds the same state for every guess that asks for it with the same
    level, capacities, budget and label count, so the pool keeps one of each and the
    driver applies each operation to it once.
    """

    def __init__(self, grid: GridHierarchy, seed: int):
        self.grid = grid
        self.seed = seed
        self._entries: dict[tuple, tuple[StoringStructure, int]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, level: int, alpha: int, beta: int, delta: float, labels: int = 1) -> StoringStructure:
        key = (level, alpha, beta, delta, labels)
        entry = self._entries.get(key)
        if entry is None:
            storing = StoringStructure(
                self.grid, level, alpha, beta, delta, derive_seed(self.seed, len(self._entries)), max_label=labels
            )
            entry = self._entries[key] = (storing, labels)
        return entry[0]

    def update(self, point: Point, sign: int) -> None:
        for storing, labels in self._entries.values():
            for label in range(1, labels + 1):
                storing.update(point, label, sign)

    def state(self) -> tuple:
        return tuple(storing.state() for storing, _ in self._entries.values())

    @property
    def nominal_buckets(self) -> int:
        return sum(storing.nominal_buckets for storing, _ in self._entries.values())

    @property
    def allocated_buckets(self) -> int:
        return sum(storing.allocated_buckets for storing, _ in self._entries.values())
