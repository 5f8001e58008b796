from __future__ import annotations

import time
from typing import List, Optional

from loguru import logger
from pydantic import BaseModel

from psys_oracle.decider.table_decider import decide_table
from psys_oracle.domain.model import SystemSpec
from psys_oracle.domain.multiset import Multiset
from psys_oracle.engine.exhaustive import VIOLATIONS, Verdict, decide_exhaustive
from psys_oracle.exceptions import BudgetExceeded
from psys_oracle.search.choice import Budget, WitnessRecord
from psys_oracle.tables.settings import SearchSettings


class CompareReport(BaseModel):
    name: str
    verdict_reference: Optional[Verdict] = None
    verdict_table: Optional[Verdict] = None
    agree: bool = False
    skipped: bool = False
    reason: Optional[str] = None
    reference_trace_length: Optional[int] = None
    table_witness: Optional[List[WitnessRecord]] = None
    reference_seconds: float = 0.0
    table_seconds: float = 0.0
    queries: int = 0
    peak_stack: int = 0

    def line(self) -> str:
        status = "skipped" if self.skipped else ("agree" if self.agree else "DISAGREE")
        reference = self.verdict_reference.value if self.verdict_reference else "-"
        table = self.verdict_table.value if self.verdict_table else "-"
        suffix = f", {self.reason}" if self.reason else ""
        return f"{self.name}: {status} ({reference} vs {table}{suffix})"


def compare(
    spec: SystemSpec,
    name: str = "",
    input: Optional[Multiset] = None,
    budget: Optional[int] = None,
    settings: Optional[SearchSettings] = None,
) -> CompareReport:
    """
    Run both deciders on one system. Systems the reference engine does not classify
    as valid recognizers are skipped, as are budget overruns.
    """
    report = CompareReport(name=name or spec.summary())

    start = time.perf_counter()
    try:
        reference = decide_exhaustive(spec, input, Budget(budget))
    except BudgetExceeded as e:
        logger.warning(f"{report.name}: reference engine over budget ({e})")
        report.skipped, report.reason = True, "reference budget exceeded"
        return report
    finally:
        report.reference_seconds = time.perf_counter() - start
    report.verdict_reference = reference.verdict
    report.reference_trace_length = len(reference.trace)
    # an accepting computation does not excuse a violating one
    if any(outcome in VIOLATIONS for outcome in reference.outcomes):
        report.skipped, report.reason = True, "out of contract"
        return report

    start = time.perf_counter()
    try:
        table = decide_table(spec, input, Budget(budget), settings)
    except BudgetExceeded as e:
        logger.warning(f"{report.name}: table decider over budget ({e})")
        report.skipped, report.reason = True, "table budget exceeded"
        return report
    finally:
        report.table_seconds = time.perf_counter() - start
    report.verdict_table = table.verdict
    report.table_witness = table.witness.records() if table.witness is not None else None
    report.queries = table.stats.queries
    report.peak_stack = table.stats.peak_stack
    report.agree = reference.verdict == table.verdict
    if not report.agree:
        logger.error(f"{report.name}: reference {reference.verdict}, table {table.verdict}")
    return report
