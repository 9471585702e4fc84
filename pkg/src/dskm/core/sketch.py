"""Distinct(s, delta): exact recovery of a dynamic multiset with at most s live items.

Each of ``R = ceil(log2(s / delta)) + 2`` rows hashes items into ``2s`` buckets holding
``(count, id_sum, fingerprint)``, where the fingerprint sums ``f * phi(x)`` for a random
cubic polynomial ``phi`` over ``2^61 - 1``. Every field is linear in the frequency vector,
so any order of the same signed updates yields the same state. Query peels verified
singletons until the rows are empty (success) or no bucket verifies (FAIL).

Buckets are stored sparsely: a row is a dict from bucket index to its fields and an
all-zero bucket is never materialized.
"""
from __future__ import annotations

import math
from collections import deque

from dskm.core.errors import DomainError
from dskm.core.hashing import MERSENNE_61, KwiseHash, PairwiseHash, derive_seed
from dskm.models.outcome_models import Fail, FailCause
from dskm.utils.logger import get_logger

logger = get_logger(__name__)

FINGERPRINT_INDEPENDENCE = 4


class SketchHashes:
    """Row hashes and fingerprint of a Distinct sketch layout; several sketches may share one."""

    def __init__(self, width: int, row_count: int, seed: int):
        self.width = width
        self.rows = PairwiseHash.family(width, row_count, derive_seed(seed, 0))
        # Non-linear: the fields of several items never pass as a multiple of one item's.
        self.fingerprint = KwiseHash.create(FINGERPRINT_INDEPENDENCE, 1.0, derive_seed(seed, 1), MERSENNE_61)

    def __len__(self) -> int:
        return len(self.rows)

    def locate(self, item: int) -> tuple[list[int], int]:
        """Bucket of ``item`` in every row, and its fingerprint."""
        return [h(item) for h in self.rows], self.fingerprint.value(item)


class DistinctSketch:
    """Linear sketch returning every live item with its frequency, or FAIL."""

    def __init__(
        self,
        capacity: int,
        delta: float,
        seed: int,
        domain: int = MERSENNE_61,
        hashes: SketchHashes | None = None,
    ):
        if capacity < 1:
            raise DomainError(f"capacity {capacity} must be >= 1")
        if not 0.0 < delta < 0.5:
            raise DomainError(f"failure budget {delta} outside (0, 1/2)")
        if not 1 <= domain <= MERSENNE_61:
            raise DomainError("item domain must lie in [1, 2^61 - 1]")
        self.capacity = capacity
        self.delta = delta
        self.seed = seed
        self.domain = domain
        self.row_count = math.ceil(math.log2(capacity / delta)) + 2
        self.width = 2 * capacity
        if hashes is None:
            hashes = SketchHashes(self.width, self.row_count, seed)
        elif (hashes.width, len(hashes)) != (self.width, self.row_count):
            raise DomainError("shared hashes do not match the sketch layout")
        self.hashes = hashes
        self._rows: list[dict[int, list[int]]] = [{} for _ in range(self.row_count)]

    def __repr__(self) -> str:
        return f"DistinctSketch(s={self.capacity}, delta={self.delta}, rows={self.row_count})"

    @property
    def nominal_buckets(self) -> int:
        return self.row_count * self.width

    @property
    def allocated_buckets(self) -> int:
        return sum(len(row) for row in self._rows)

    def is_empty(self) -> bool:
        return not any(self._rows)

    def update(self, item: int, sign: int) -> None:
        """Apply ``sign`` (+1 insert, -1 delete) to ``item``."""
        if sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {sign}")
        if not 0 <= item < self.domain:
            raise DomainError(f"item {item} outside [0, {self.domain})")
        buckets, phi = self.hashes.locate(item)
        self.update_located(item, sign, buckets, phi)

    def update_located(self, item: int, sign: int, buckets: list[int], phi: int) -> None:
        """``update`` with the output of ``self.hashes.locate(item)`` already at hand."""
        signed_phi = (sign * phi) % MERSENNE_61
        for row, b in zip(self._rows, buckets):
            bucket = row.get(b)
            if bucket is None:
                row[b] = [sign, sign * item, signed_phi]
                continue
            bucket[0] += sign
            bucket[1] += sign * item
            bucket[2] = (bucket[2] + signed_phi) % MERSENNE_61
            if bucket[0] == 0 and bucket[1] == 0 and bucket[2] == 0:
                del row[b]

    def state(self) -> tuple:
        """Canonical snapshot of every non-zero bucket."""
        return tuple(
            tuple(sorted((b, tuple(fields)) for b, fields in row.items())) for row in self._rows
        )

    def query(self) -> dict[int, int] | Fail:
        """Peel a copy of the rows; the sketch itself is left untouched."""
        rows = [{b: list(fields) for b, fields in row.items()} for row in self._rows]
        recovered: dict[int, int] = {}
        pending = deque((r, b) for r, row in enumerate(rows) for b in row)
        while pending:
            r, b = pending.popleft()
            bucket = rows[r].get(b)
            if bucket is None:
                continue
            item = self._verified_item(r, b, bucket)
            if item is None:
                continue
            if item in recovered:
                return Fail(cause=FailCause.SKETCH_DECODE, detail=f"item {item} peeled twice")
            count = bucket[0]
            recovered[item] = count
            buckets, phi = self.hashes.locate(item)
            for r2, (row, b2) in enumerate(zip(rows, buckets)):
                fields = row.get(b2)
                if fields is None:
                    return Fail(cause=FailCause.SKETCH_DECODE, detail=f"item {item} missing from row {r2}")
                fields[0] -= count
                fields[1] -= count * item
                fields[2] = (fields[2] - count * phi) % MERSENNE_61
                if fields[0] == 0 and fields[1] == 0 and fields[2] == 0:
                    del row[b2]
                else:
                    pending.append((r2, b2))
        if any(rows):
            logger.debug("%r stalled with %d items peeled", self, len(recovered))
            return Fail(
                cause=FailCause.SKETCH_DECODE,
                detail=f"decode stalled after {len(recovered)} items (capacity {self.capacity})",
            )
        if len(recovered) > self.capacity:
            return Fail(
                cause=FailCause.SKETCH_DECODE,
                detail=f"{len(recovered)} live items exceed capacity {self.capacity}",
            )
        return dict(sorted(recovered.items()))

    def _verified_item(self, r: int, b: int, bucket: list[int]) -> int | None:
        count, id_sum, fingerprint = bucket
        if count <= 0 or id_sum % count:
            return None
        item = id_sum // count
        if not 0 <= item < self.domain or self.hashes.rows[r](item) != b:
            return None
        if fingerprint != (count * self.hashes.fingerprint.value(item)) % MERSENNE_61:
            return None
        return item
