from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

Phase = Literal["divide", "send_in", "send_out"]
DEFAULT_PHASE_ORDER: Tuple[Phase, ...] = ("divide", "send_in", "send_out")


class SearchSettings(BaseModel):
    """Switches for the table decider. Every prune keeps the set of accepted systems unchanged."""

    model_config = ConfigDict(frozen=True)

    label_caps: bool = Field(
        True, description="Cap communication guesses by the membranes a label can have at step t"
    )
    eager_overdraw: bool = Field(
        True, description="Skip inner communication guesses whose table entry is already zero"
    )
    cumulative_sendin_prune: bool = Field(
        False, description="Bound send-in guesses by trigger copies not yet marked this step"
    )
    memoize_queries: bool = Field(True, description="Reuse query answers for identical tables")
    phase_order: Tuple[Phase, ...] = Field(
        DEFAULT_PHASE_ORDER, description="Order of blocking-rule guesses in the inner simulation"
    )

    @field_validator("phase_order")
    @classmethod
    def check_phase_order(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if sorted(value) != sorted(DEFAULT_PHASE_ORDER):
            raise ValueError(f"phase_order must be a permutation of {DEFAULT_PHASE_ORDER}")
        return value
