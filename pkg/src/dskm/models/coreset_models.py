"""Pydantic models for weighted points and coresets."""
from pydantic import BaseModel, Field, field_validator
import numpy as np


class WeightedPoint(BaseModel):
    """A grid point with a strictly positive weight."""
    point: tuple[int, ...]
    weight: float = Field(gt=0.0)


class CoresetMetadata(BaseModel):
    """How a coreset was produced.

    ``draw_levels`` lists, per sampled entry, the level it was drawn from, so every
    weight can be recomputed as ``t_prime / (m * s'(level))``.
    """
    guess: float | None = None
    t_prime: float = 0.0
    m: int = 0
    levels: list[int] = Field(default_factory=list)
    draw_levels: list[int] = Field(default_factory=list)
    source: str = "sampler"


class Coreset(BaseModel):
    """Weighted point set standing in for the live point set."""
    entries: list[WeightedPoint] = Field(default_factory=list)
    metadata: CoresetMetadata = Field(default_factory=CoresetMetadata)

    @field_validator("entries")
    @classmethod
    def _same_dimension(cls, entries: list[WeightedPoint]) -> list[WeightedPoint]:
        if entries and len({len(e.point) for e in entries}) != 1:
            raise ValueError("coreset points must share one dimension")
        return entries

    @classmethod
    def unit_weight(cls, points, source: str = "exact") -> "Coreset":
        """Coreset holding every point once with weight 1."""
        entries = [WeightedPoint(point=tuple(int(x) for x in p), weight=1.0) for p in sorted(points)]
        return cls(entries=entries, metadata=CoresetMetadata(source=source))

    def __len__(self) -> int:
        return len(self.entries)

    def points_array(self) -> np.ndarray:
        return np.array([e.point for e in self.entries], dtype=float)

    def weights_array(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=float)

    def total_weight(self) -> float:
        return float(sum(e.weight for e in self.entries))
