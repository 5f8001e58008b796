import json
import time
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.commands.status import VERDICT_STATUS, ExitStatus
from psys_oracle.decider import decide_table, replay_table
from psys_oracle.dsl import load_system, parse_multiset
from psys_oracle.engine import decide_exhaustive, write_trace
from psys_oracle.engine.exhaustive import Verdict
from psys_oracle.exceptions import (
    BudgetExceeded,
    ConfigurationError,
    InvalidInputError,
    InvalidSystemError,
    PsysSyntaxError,
    ReplayError,
)
from psys_oracle.search import Budget, Witness
from psys_oracle.tables import SearchSettings


class DecideInput(BaseModel):
    path: str
    mode: Literal["reference", "table"] = "reference"
    input: Optional[str] = None
    trace: Optional[str] = None
    witness: Optional[str] = None
    replay: Optional[str] = None
    tables: Optional[str] = None
    budget: Optional[int] = Field(None, gt=0)
    settings: SearchSettings = SearchSettings()


class DecideOutput(BaseModel):
    success: bool
    exit_status: ExitStatus
    mode: str
    verdict: Optional[Verdict] = None
    trace_length: Optional[int] = None
    witness_length: Optional[int] = None
    computations: Optional[int] = None
    configurations: Optional[int] = None
    nodes: Optional[int] = None
    queries: Optional[int] = None
    cache_hits: Optional[int] = None
    peak_stack: Optional[int] = None
    tables: Optional[Dict[str, Any]] = None
    processing_time: float = 0.0
    error_message: Optional[str] = None


def _decide_reference(input_data: DecideInput, spec, injected, budget) -> DecideOutput:
    decision = decide_exhaustive(spec, injected, budget)
    if input_data.trace:
        write_trace(input_data.trace, decision.trace)
    if input_data.witness or input_data.tables:
        logger.warning("Witness and table files are only written in table mode")
    return DecideOutput(
        success=True,
        exit_status=VERDICT_STATUS[decision.verdict],
        mode="reference",
        verdict=decision.verdict,
        trace_length=len(decision.trace),
        computations=decision.computations,
        configurations=decision.configurations,
    )


def _decide_table(input_data: DecideInput, spec, injected, budget) -> DecideOutput:
    if input_data.replay:
        decision = replay_table(
            spec, Witness.load(input_data.replay), injected, budget, input_data.settings
        )
        mode = "replay"
    else:
        decision = decide_table(spec, injected, budget, input_data.settings)
        mode = "table"
    if input_data.trace:
        logger.warning("Step traces are only written in reference mode")
    if input_data.witness and decision.witness is not None:
        decision.witness.dump(input_data.witness)
        logger.info(f"Witness of {len(decision.witness)} choice(s) written to {input_data.witness}")
    tables = decision.tables()
    if input_data.tables and tables is not None:
        Path(input_data.tables).write_text(json.dumps(tables, indent=2) + "\n", encoding="utf-8")
    return DecideOutput(
        success=True,
        exit_status=VERDICT_STATUS[decision.verdict],
        mode=mode,
        verdict=decision.verdict,
        witness_length=len(decision.witness) if decision.witness is not None else None,
        nodes=decision.nodes,
        queries=decision.stats.queries,
        cache_hits=decision.stats.cache_hits,
        peak_stack=decision.stats.peak_stack,
        tables=tables,
    )


def decide_command(input_data: DecideInput) -> DecideOutput:
    """Run the selected decider on one .psys file and map the verdict to an exit status."""
    start_time = time.time()
    mode = "table" if input_data.replay else input_data.mode

    def failed(status: ExitStatus, error: Exception) -> DecideOutput:
        return DecideOutput(
            success=False,
            exit_status=status,
            mode=mode,
            processing_time=time.time() - start_time,
            error_message=str(error),
        )

    try:
        logger.info(f"Deciding {input_data.path} in {mode} mode")
        spec = load_system(input_data.path)
        injected = parse_multiset(input_data.input) if input_data.input else None
        budget = Budget(input_data.budget)
        if mode == "reference":
            output = _decide_reference(input_data, spec, injected, budget)
        else:
            output = _decide_table(input_data, spec, injected, budget)
        output.processing_time = time.time() - start_time
        logger.info(f"Verdict {output.verdict} in {output.processing_time:.2f}s")
        return output
    except (PsysSyntaxError, InvalidSystemError) as e:
        logger.error(f"Invalid system: {e}")
        return failed(ExitStatus.INVALID, e)
    except BudgetExceeded as e:
        logger.error(f"Decision aborted: {e}")
        return failed(ExitStatus.BOUND, e)
    except (OSError, ReplayError, InvalidInputError, ConfigurationError) as e:
        logger.error(f"Decision failed: {e}")
        return failed(ExitStatus.USAGE, e)
