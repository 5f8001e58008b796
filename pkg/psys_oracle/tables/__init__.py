from .inner import (
    InnerStack,
    QueryStats,
    StackEntry,
    answer_query,
    init_stack,
    simulate_inner_membrane,
)
from .outermost import (
    Emission,
    OuterRunOutcome,
    OuterState,
    run_outermost,
    simulate_outer_step,
    skin_quiescent,
)
from .settings import SearchSettings
from .tables import (
    GuessCap,
    InteractionTable,
    UnusedTable,
    compute_guess_cap,
    dump_tables,
)

__all__ = [
    "Emission",
    "GuessCap",
    "InnerStack",
    "InteractionTable",
    "OuterRunOutcome",
    "OuterState",
    "QueryStats",
    "SearchSettings",
    "StackEntry",
    "UnusedTable",
    "answer_query",
    "compute_guess_cap",
    "dump_tables",
    "init_stack",
    "run_outermost",
    "simulate_inner_membrane",
    "simulate_outer_step",
    "skin_quiescent",
]
