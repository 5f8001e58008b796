from .compare_commands import CompareInput, CompareOutput, compare_command
from .decide_commands import DecideInput, DecideOutput, decide_command
from .gen_commands import GenInput, GenOutput, gen_command
from .run_commands import RunInput, RunOutput, run_command
from .status import ExitStatus
from .validate_commands import ValidateInput, ValidateOutput, validate_command

__all__ = [
    "CompareInput",
    "CompareOutput",
    "DecideInput",
    "DecideOutput",
    "ExitStatus",
    "GenInput",
    "GenOutput",
    "RunInput",
    "RunOutput",
    "ValidateInput",
    "ValidateOutput",
    "compare_command",
    "decide_command",
    "gen_command",
    "run_command",
    "validate_command",
]
