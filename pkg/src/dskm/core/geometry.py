"""Randomly shifted grid hierarchy, cell geometry and k-means costs.

Cells of level ``i`` have side ``g_i = Delta / 2^i`` (``g_{-1} = 2 Delta``). A point ``p``
lies in the cell with lattice index ``floor((p_j + v_j) / g_i)`` on every axis, so the grid
vertex sits at ``-v``. Shifting by ``-v`` instead of ``+v`` gives the same distribution of
grids for ``v`` uniform in ``[0, Delta - 1]^d`` and keeps every lattice index non-negative;
the single level -1 cell always has index ``(0, ..., 0)``.
"""
from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from dskm.core.errors import DomainError
from dskm.models.instance_models import ClusteringInstance

Point = tuple[int, ...]
ROOT_LEVEL = -1


class CellId(NamedTuple):
    level: int
    coords: tuple[int, ...]


class GridHierarchy:
    """Nested grids ``G_{-1} .. G_L`` sharing one random shift."""

    def __init__(self, instance: ClusteringInstance, shift: Sequence[int]):
        shift = tuple(int(x) for x in shift)
        if len(shift) != instance.d:
            raise DomainError(f"shift has {len(shift)} coordinates, expected {instance.d}")
        if any(not 0 <= x < instance.side for x in shift):
            raise DomainError(f"shift coordinates must lie in [0, {instance.side - 1}]")
        self.instance = instance
        self.shift = shift

    @classmethod
    def random(cls, instance: ClusteringInstance, rng: np.random.Generator | int | None = None) -> "GridHierarchy":
        """Draw the shift uniformly from ``[0, Delta - 1]^d``."""
        rng = np.random.default_rng(rng)
        shift = rng.integers(0, instance.side, size=instance.d)
        return cls(instance, [int(x) for x in shift])

    def __repr__(self) -> str:
        return f"GridHierarchy(d={self.instance.d}, L={self.instance.levels}, shift={self.shift})"

    @property
    def levels(self) -> range:
        """Levels carrying thresholds, ``0 .. L``."""
        return range(self.instance.levels + 1)

    @property
    def cell_domain(self) -> int:
        """Size of the integer range ``encode_cell`` maps one level into."""
        return (2 * self.instance.side) ** self.instance.d

    def side_length(self, level: int) -> int:
        self._check_level(level)
        if level == ROOT_LEVEL:
            return 2 * self.instance.side
        return self.instance.side >> level

    def cell_of(self, point: Sequence[int], level: int) -> CellId:
        """The level-``level`` cell containing ``point``."""
        g = self.side_length(level)
        self._check_point(point)
        return CellId(level, tuple((x + v) // g for x, v in zip(point, self.shift)))

    def cells_of(self, point: Sequence[int]) -> list[CellId]:
        """Cells containing ``point`` at levels -1 .. L, coarsest first."""
        self._check_point(point)
        cells = []
        for level in range(ROOT_LEVEL, self.instance.levels + 1):
            g = self.side_length(level)
            cells.append(CellId(level, tuple((x + v) // g for x, v in zip(point, self.shift))))
        return cells

    def parent(self, cell: CellId) -> CellId:
        if cell.level == ROOT_LEVEL:
            raise DomainError("the root cell has no parent")
        self._check_level(cell.level)
        return CellId(cell.level - 1, tuple(c // 2 for c in cell.coords))

    def ancestors(self, cell: CellId) -> list[CellId]:
        """Ancestors of ``cell`` from its parent up to the root."""
        chain = []
        while cell.level > ROOT_LEVEL:
            cell = self.parent(cell)
            chain.append(cell)
        return chain

    def cell_box(self, cell: CellId) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of the cell's extent in point space."""
        g = self.side_length(cell.level)
        lo = np.array([n * g - v for n, v in zip(cell.coords, self.shift)], dtype=float)
        return lo, lo + g

    def cell_distance(self, cell: CellId, z: Sequence[float]) -> float:
        """Euclidean distance from ``z`` to the closure of ``cell``."""
        lo, hi = self.cell_box(cell)
        z = np.asarray(z, dtype=float)
        gap = np.maximum(np.maximum(lo - z, z - hi), 0.0)
        return float(np.sqrt(np.dot(gap, gap)))

    def encode_cell(self, cell: CellId) -> int:
        """Injective map of one level's cells into ``[0, cell_domain)``."""
        radix = 2 * self.instance.side
        key = 0
        for c in reversed(cell.coords):
            if not 0 <= c < radix:
                raise DomainError(f"cell coordinate {c} outside the encodable range")
            key = key * radix + c
        return key

    def decode_cell(self, key: int, level: int) -> CellId:
        radix = 2 * self.instance.side
        coords = []
        for _ in range(self.instance.d):
            key, c = divmod(key, radix)
            coords.append(c)
        return CellId(level, tuple(coords))

    def domain_bounds(self, level: int) -> list[tuple[int, int]]:
        """Per-coordinate index range ``(first, last)`` of the level's cells meeting ``[1, Delta]^d``."""
        g = self.side_length(level)
        return [((1 + v) // g, (self.instance.side + v) // g) for v in self.shift]

    def _check_level(self, level: int) -> None:
        if not ROOT_LEVEL <= level <= self.instance.levels:
            raise DomainError(f"level {level} outside [-1, {self.instance.levels}]")

    def _check_point(self, point: Sequence[int]) -> None:
        if not self.instance.contains(point):
            raise DomainError(f"point {tuple(point)} outside [1, {self.instance.side}]^{self.instance.d}")


def dist2(p: Sequence[float], z: Sequence[float]) -> float:
    """Squared Euclidean distance."""
    if len(p) != len(z):
        raise DomainError(f"dimension mismatch: {len(p)} vs {len(z)}")
    diff = np.asarray(p, dtype=float) - np.asarray(z, dtype=float)
    return float(np.dot(diff, diff))


def cost(points, centers, weights=None) -> float:
    """Weighted k-means cost: sum of weight times squared distance to the nearest center."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.size == 0:
        raise DomainError("the center set must not be empty")
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return 0.0
    points = np.atleast_2d(points)
    if points.shape[1] != centers.shape[1]:
        raise DomainError(f"dimension mismatch: {points.shape[1]} vs {centers.shape[1]}")
    nearest = cdist(points, centers, metric="sqeuclidean").min(axis=1)
    if weights is None:
        return float(nearest.sum())
    return float(np.dot(np.asarray(weights, dtype=float), nearest))


def center_cells_at_level(grid: GridHierarchy, centers, level: int) -> set[CellId]:
    """Cells of ``level`` meeting the domain within ``g_level / (2d)`` of some center."""
    d = grid.instance.d
    g = grid.side_length(level)
    radius = g / (2 * d)
    domain = grid.domain_bounds(level)
    found: set[CellId] = set()
    for z in np.atleast_2d(np.asarray(centers, dtype=float)):
        ranges = []
        for zj, v, (low, high) in zip(z, grid.shift, domain):
            first = max(low, math.ceil((zj - radius + v) / g) - 1)
            last = min(high, math.floor((zj + radius + v) / g))
            ranges.append(range(first, last + 1))
        for coords in itertools.product(*ranges):
            cell = CellId(level, coords)
            if grid.cell_distance(cell, z) <= radius:
                found.add(cell)
    return found


def count_center_cells(grid: GridHierarchy, centers) -> int:
    """Number of center cells over levels 0 .. L."""
    return sum(len(center_cells_at_level(grid, centers, level)) for level in grid.levels)
