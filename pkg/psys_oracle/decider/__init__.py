from .compare import CompareReport, compare
from .generator import GenParams, generate_system
from .table_decider import TableDecision, decide_table, replay_table

__all__ = [
    "CompareReport",
    "GenParams",
    "TableDecision",
    "compare",
    "decide_table",
    "generate_system",
    "replay_table",
]
