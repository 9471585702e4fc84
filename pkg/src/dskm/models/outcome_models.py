"""FAIL outcomes. FAIL is a legitimate algorithm result, returned as a value."""
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from pydantic import BaseModel, Field


class FailCause(StrEnum):
    SKETCH_DECODE = "sketch-decode"
    STORING = "storing-fail"
    STORING_DISAGREEMENT = "storing-disagreement"
    ESTIMATION = "estimation-fail"
    OVERFLOW = "overflow-fail"
    EXHAUSTED_LABELS = "exhausted-labels"
    NO_VIABLE_GUESS = "no-viable-guess"


class Fail(BaseModel):
    """Algorithmic failure with its cause."""
    cause: FailCause
    detail: str = ""
    guess_causes: dict[int, str] = Field(
        default_factory=dict,
        description="Per-guess outcome (u -> cause or 'oversized') when the driver fails",
    )

    def describe(self) -> str:
        text = f"FAIL ({self.cause.value})"
        if self.detail:
            text += f": {self.detail}"
        return text


def is_fail(value) -> bool:
    return isinstance(value, Fail)
