from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.commands.status import ExitStatus
from psys_oracle.domain import initial_configuration
from psys_oracle.dsl import load_system, parse_multiset
from psys_oracle.engine import sample_computation, write_trace
from psys_oracle.engine.exhaustive import Outcome
from psys_oracle.exceptions import (
    BudgetExceeded,
    InvalidInputError,
    InvalidSystemError,
    PsysSyntaxError,
)
from psys_oracle.search import Budget

OUTCOME_STATUS = {
    Outcome.ACCEPT: ExitStatus.ACCEPT,
    Outcome.REJECT: ExitStatus.REJECT,
    Outcome.BOUND_EXCEEDED: ExitStatus.BOUND,
}


class RunInput(BaseModel):
    path: str
    seed: int = 1
    input: Optional[str] = None
    trace: Optional[str] = None
    budget: Optional[int] = Field(None, gt=0)


class RunOutput(BaseModel):
    success: bool
    exit_status: ExitStatus
    outcome: Optional[Outcome] = None
    configurations: List[str] = []
    error_message: Optional[str] = None


def run_command(input_data: RunInput) -> RunOutput:
    """Follow one seeded computation with the reference semantics and list its configurations."""
    try:
        spec = load_system(input_data.path)
        injected = parse_multiset(input_data.input) if input_data.input else None
        trace, outcome = sample_computation(
            spec, input_data.seed, injected, Budget(input_data.budget)
        )
    except OSError as e:
        logger.error(f"Cannot read {input_data.path}: {e}")
        return RunOutput(success=False, exit_status=ExitStatus.USAGE, error_message=str(e))
    except (PsysSyntaxError, InvalidSystemError) as e:
        logger.error(f"Invalid system: {e}")
        return RunOutput(success=False, exit_status=ExitStatus.INVALID, error_message=str(e))
    except InvalidInputError as e:
        return RunOutput(success=False, exit_status=ExitStatus.USAGE, error_message=str(e))
    except BudgetExceeded as e:
        return RunOutput(success=False, exit_status=ExitStatus.BOUND, error_message=str(e))

    if input_data.trace:
        write_trace(input_data.trace, trace)
    configurations = [f"0: {initial_configuration(spec, injected).render()}"]
    configurations += [f"{step.time + 1}: {step.after.render()}" for step in trace]
    return RunOutput(
        success=outcome in (Outcome.ACCEPT, Outcome.REJECT),
        exit_status=OUTCOME_STATUS.get(outcome, ExitStatus.INVALID),
        outcome=outcome,
        configurations=configurations,
    )
