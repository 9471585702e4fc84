"""Pydantic models for driver, space and verification reports."""
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from pydantic import BaseModel, Field, computed_field

from dskm.models.coreset_models import Coreset
from dskm.models.outcome_models import Fail


class GuessStatus(StrEnum):
    OK = "ok"
    FAIL = "fail"
    OVERSIZED = "oversized"


class GuessOutcome(BaseModel):
    """What one sampler produced at query time."""
    u: int
    guess: float
    status: GuessStatus
    cause: str | None = None
    size: int | None = None


class QueryReport(BaseModel):
    """Driver query result together with the per-guess outcomes behind it."""
    shortcut: bool
    selected: int | None = None
    outcomes: list[GuessOutcome] = Field(default_factory=list)
    result: Coreset | Fail


class SpaceReport(BaseModel):
    """Bucket accounting of one driver.

    Nominal counts are the buckets the parameters reserve; allocated counts are the
    non-zero buckets currently held. Each guess's nominal count includes the shared
    Storing structures it reads; their allocated buckets are held once, under ``shared_allocated``.
    """
    shortcut_nominal: int
    shortcut_allocated: int
    shared_nominal: int = 0
    shared_allocated: int = 0
    per_guess_nominal: dict[int, int] = Field(default_factory=dict)
    per_guess_allocated: dict[int, int] = Field(default_factory=dict)

    @computed_field
    @property
    def total_nominal(self) -> int:
        return self.shortcut_nominal + sum(self.per_guess_nominal.values())

    @computed_field
    @property
    def total_allocated(self) -> int:
        return self.shortcut_allocated + self.shared_allocated + sum(self.per_guess_allocated.values())


class FamilyResult(BaseModel):
    """Relative cost errors of one center-set family."""
    family: str
    count: int
    max_error: float = 0.0
    quantiles: dict[str, float] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    epsilon: float
    max_error: float
    quantiles: dict[str, float] = Field(default_factory=dict)
    families: list[FamilyResult] = Field(default_factory=list)
    evaluated: int = 0

    @computed_field
    @property
    def passed(self) -> bool:
        return self.max_error <= self.epsilon


class OfflineSolution(BaseModel):
    """k centers with their cost on the solved point set."""
    centers: list[tuple[float, ...]]
    cost: float = Field(ge=0.0)
    method: str = Field(pattern="^(exact|heuristic)$")
