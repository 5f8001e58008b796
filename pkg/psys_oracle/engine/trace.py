"""JSONL step traces: one record per (step, membrane label, rule) application count."""

import json
from pathlib import Path
from typing import Dict, Iterable, List

from loguru import logger

from psys_oracle.engine.steps import StepTrace


def trace_records(trace: Iterable[StepTrace]) -> List[Dict]:
    records = []
    for step in trace:
        counts = step.assignment.rule_counts(step.before.skin.label)
        for (membrane, ordinal), count in counts.items():
            records.append(
                {
                    "time": step.time,
                    "membrane": membrane,
                    "rule_ordinal": ordinal,
                    "count": count,
                    "configuration": step.after.render(),
                }
            )
    return records


def write_trace(path: str | Path, trace: Iterable[StepTrace]) -> int:
    """Write the trace as JSON lines; returns the number of records written."""
    records = trace_records(trace)
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
    logger.debug(f"Wrote {len(records)} trace record(s) to {path}")
    return len(records)
