"""Pydantic models for run configuration and constant scaling."""
import math

from pydantic import BaseModel, ConfigDict, Field, field_validator

VERIFY_FAMILIES = (
    "uniform",
    "kmeanspp_q",
    "kmeanspp_s",
    "perturbed_opt",
    "adversarial",
)


class ScaleConfig(BaseModel):
    """Constant-scale knob kappa with optional per-group overrides.

    Every group left unset uses ``kappa``, except ``rate``, which stays 1 unless
    overridden: shrinking a rate constant changes which points are sampled. Groups:
    - shortcut: the 10000k capacity of the small-instance Distinct
    - capacity: alpha, alpha', m_hat, beta of the estimation and sampling structures
    - rate: the 4*10^4 and 10^4 leading constants of the subsampling rates
    - independence: the factor 10 in lambda
    - sample: the number of draws m
    - size: the coreset size threshold h
    """
    model_config = ConfigDict(frozen=True)

    kappa: float = Field(default=1.0, gt=0.0, le=1.0)
    shortcut_scale: float | None = Field(default=None, gt=0.0)
    capacity_scale: float | None = Field(default=None, gt=0.0)
    rate_scale: float | None = Field(default=None, gt=0.0)
    independence_scale: float | None = Field(default=None, gt=0.0)
    sample_scale: float | None = Field(default=None, gt=0.0)
    size_scale: float | None = Field(default=None, gt=0.0)

    def _pick(self, value: float | None) -> float:
        return self.kappa if value is None else value

    @property
    def shortcut(self) -> float:
        return self._pick(self.shortcut_scale)

    @property
    def capacity(self) -> float:
        return self._pick(self.capacity_scale)

    @property
    def rate(self) -> float:
        return 1.0 if self.rate_scale is None else self.rate_scale

    @property
    def independence(self) -> float:
        return self._pick(self.independence_scale)

    @property
    def sample(self) -> float:
        return self._pick(self.sample_scale)

    @property
    def size(self) -> float:
        return self._pick(self.size_scale)

    @staticmethod
    def scaled_count(scale: float, value: float) -> int:
        """Integer capacity ``max(1, ceil(scale * value))``."""
        return max(1, math.ceil(scale * value))


class RunConfig(BaseModel):
    """Validated options shared by the CLI commands."""
    k: int = Field(default=3, ge=1)
    epsilon: float = Field(default=0.25)
    seed: int = Field(default=0, ge=0)
    scale: ScaleConfig = Field(default_factory=ScaleConfig)
    families: dict[str, int] = Field(
        default_factory=lambda: {name: 40 for name in VERIFY_FAMILIES}
    )
    workers: int = Field(default=1, ge=1)
    out: str | None = None

    @field_validator("epsilon")
    @classmethod
    def _epsilon_in_range(cls, value: float) -> float:
        if not 0.0 < value < 0.5:
            raise ValueError("epsilon must lie strictly inside (0, 0.5)")
        return value

    @field_validator("families")
    @classmethod
    def _known_families(cls, value: dict[str, int]) -> dict[str, int]:
        unknown = sorted(set(value) - set(VERIFY_FAMILIES))
        if unknown:
            raise ValueError(f"unknown verification families: {', '.join(unknown)}")
        if any(count < 0 for count in value.values()):
            raise ValueError("family counts must be non-negative")
        return value
