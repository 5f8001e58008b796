from .exhaustive import (
    ExhaustiveDecision,
    Outcome,
    ValidityReport,
    Verdict,
    check_recognizer_validity,
    decide_exhaustive,
    result_count,
    sample_computation,
)
from .steps import (
    MembranePlan,
    RuleAssignment,
    StepTrace,
    applicable_rules,
    apply_assignment,
    enumerate_maximal_assignments,
    is_halted,
    is_maximal,
    successors,
    transitions,
)
from .trace import trace_records, write_trace

__all__ = [
    "ExhaustiveDecision",
    "MembranePlan",
    "Outcome",
    "RuleAssignment",
    "StepTrace",
    "ValidityReport",
    "Verdict",
    "applicable_rules",
    "apply_assignment",
    "check_recognizer_validity",
    "decide_exhaustive",
    "enumerate_maximal_assignments",
    "is_halted",
    "is_maximal",
    "result_count",
    "sample_computation",
    "successors",
    "trace_records",
    "transitions",
    "write_trace",
]
