"""Pydantic models for dynamic streams."""
from typing import NamedTuple

from pydantic import BaseModel, Field


class StreamOp(NamedTuple):
    """One stream operation: ``sign`` is +1 (insert) or -1 (delete)."""
    sign: int
    point: tuple[int, ...]


class StreamFile(BaseModel):
    """A dimension, grid exponent and the operation sequence over ``[1, 2^L]^d``."""
    d: int = Field(ge=1)
    delta_exp: int = Field(ge=1)
    operations: list[StreamOp] = Field(default_factory=list)

    @property
    def inserts(self) -> int:
        return sum(1 for op in self.operations if op.sign > 0)

    @property
    def deletes(self) -> int:
        return sum(1 for op in self.operations if op.sign < 0)
