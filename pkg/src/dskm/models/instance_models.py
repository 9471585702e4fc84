"""Pydantic model for a clustering instance over the grid [1, 2^L]^d."""
from pydantic import BaseModel, ConfigDict, Field, field_validator


class ClusteringInstance(BaseModel):
    """Dimension, grid exponent, number of centers and accuracy of one run."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=1, description="Dimension of the point space")
    delta_exp: int = Field(ge=1, description="L, with grid side Delta = 2^L")
    k: int = Field(ge=1, description="Number of centers")
    epsilon: float = Field(description="Coreset accuracy, strictly inside (0, 1/2)")

    @field_validator("epsilon")
    @classmethod
    def _epsilon_in_range(cls, value: float) -> float:
        if not 0.0 < value < 0.5:
            raise ValueError("epsilon must lie strictly inside (0, 1/2)")
        return value

    @property
    def side(self) -> int:
        """Grid side Delta."""
        return 1 << self.delta_exp

    @property
    def levels(self) -> int:
        """L, the index of the finest grid."""
        return self.delta_exp

    @property
    def domain_size(self) -> int:
        """Number of grid points, Delta^d."""
        return self.side ** self.d

    def contains(self, point) -> bool:
        return len(point) == self.d and all(1 <= x <= self.side for x in point)
