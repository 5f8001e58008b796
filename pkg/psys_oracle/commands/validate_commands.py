from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.commands.status import ExitStatus
from psys_oracle.dsl import load_system
from psys_oracle.engine import check_recognizer_validity
from psys_oracle.exceptions import BudgetExceeded, InvalidSystemError, PsysSyntaxError
from psys_oracle.search import Budget


class ValidateInput(BaseModel):
    path: str
    check_recognizer: bool = False
    bound: Optional[int] = Field(None, ge=0)
    budget: Optional[int] = Field(None, gt=0)


class ValidateOutput(BaseModel):
    success: bool
    exit_status: ExitStatus
    summary: Optional[str] = None
    computations: Optional[int] = None
    violations: List[str] = []
    error_message: Optional[str] = None


def validate_command(input_data: ValidateInput) -> ValidateOutput:
    """
    Parse and validate a .psys file; optionally enumerate its computations and report
    every way it breaks the recognizer contract.
    """
    try:
        spec = load_system(input_data.path)
    except OSError as e:
        logger.error(f"Cannot read {input_data.path}: {e}")
        return ValidateOutput(success=False, exit_status=ExitStatus.USAGE, error_message=str(e))
    except (PsysSyntaxError, InvalidSystemError) as e:
        logger.error(f"Invalid system {input_data.path}: {e}")
        return ValidateOutput(success=False, exit_status=ExitStatus.INVALID, error_message=str(e))

    output = ValidateOutput(success=True, exit_status=ExitStatus.ACCEPT, summary=spec.summary())
    if not input_data.check_recognizer:
        return output

    try:
        report = check_recognizer_validity(
            spec, bound=input_data.bound, budget=Budget(input_data.budget)
        )
    except BudgetExceeded as e:
        return ValidateOutput(
            success=False,
            exit_status=ExitStatus.BOUND,
            summary=spec.summary(),
            error_message=str(e),
        )
    output.computations = report.computations
    output.violations = [
        f"{kind} (witness of {len(report.violations[kind])} step(s))" for kind in report.kinds()
    ]
    if not report.valid:
        output.success = False
        output.exit_status = ExitStatus.INVALID
    return output
