"""
Table-based decider: search the outer simulation's choices, and on every branch that
sends out a result ask the inner query whether the guessed tables can be realised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Optional, Tuple

from loguru import logger

from psys_oracle.domain.configuration import inject_input
from psys_oracle.domain.model import SystemSpec
from psys_oracle.domain.multiset import Multiset
from psys_oracle.domain.rulebook import RuleBook
from psys_oracle.engine.exhaustive import Verdict
from psys_oracle.exceptions import RejectedBranch
from psys_oracle.search.choice import (
    Budget,
    Choice,
    Chooser,
    ReplayChooser,
    Witness,
    explore,
    replay,
)
from psys_oracle.tables.inner import QueryStats, answer_query
from psys_oracle.tables.outermost import Emission, OuterRunOutcome, run_outermost
from psys_oracle.tables.settings import SearchSettings
from psys_oracle.tables.tables import dump_tables


@dataclass
class TableDecision:
    verdict: Verdict
    witness: Optional[Witness] = None
    outcome: Optional[OuterRunOutcome] = None
    leaves: int = 0
    nodes: int = 0
    stats: QueryStats = field(default_factory=QueryStats)

    def tables(self) -> Optional[Dict]:
        if self.outcome is None:
            return None
        return dump_tables(self.outcome.interactions, self.outcome.unused)


class _TableProcedure:
    """The composed nondeterministic procedure, with its query cache."""

    def __init__(self, spec: SystemSpec, budget: Budget, settings: SearchSettings):
        self.spec = spec
        self.book = RuleBook(spec)
        self.budget = budget
        self.settings = settings
        self.stats = QueryStats()
        self.cache: Dict[Hashable, Optional[Tuple[Choice, ...]]] = {}
        self.consistent_no = False

    def __call__(self, chooser: Chooser) -> OuterRunOutcome:
        outcome = run_outermost(self.spec, chooser, self.settings, self.book)
        if not self._consistent(outcome, chooser):
            raise RejectedBranch(f"query failed for emission at step {outcome.halt_time}")
        return outcome

    def _consistent(self, outcome: OuterRunOutcome, chooser: Chooser) -> bool:
        if self.spec.m == 0:
            return True
        residue = outcome.state.w if outcome.state is not None else Multiset()

        def query(query_chooser: Chooser) -> bool:
            return answer_query(
                self.spec,
                outcome.interactions,
                outcome.unused,
                outcome.halt_time,
                query_chooser,
                residue,
                self.settings,
                self.book,
                self.stats,
            )

        if isinstance(chooser, ReplayChooser):
            # the recorded query choices follow the outer ones
            self.stats.queries += 1
            return query(chooser)

        key = (outcome.interactions.key(), outcome.unused.key(), outcome.halt_time, residue)
        if self.settings.memoize_queries and key in self.cache:
            self.stats.cache_hits += 1
            choices = self.cache[key]
        else:
            self.stats.queries += 1
            found = explore(query, budget=self.budget)
            choices = found.witness.choices if found.accepted and found.witness is not None else None
            if self.settings.memoize_queries:
                self.cache[key] = choices
        if choices is None:
            return False
        chooser.adopt(choices)
        return True

    def on_leaf(self, outcome: Optional[OuterRunOutcome], accepted: bool) -> None:
        if outcome is not None and outcome.result is Emission.EMIT_NO:
            self.consistent_no = True


def _emits_yes(outcome: OuterRunOutcome) -> bool:
    return outcome.result is Emission.EMIT_YES


def decide_table(
    spec: SystemSpec,
    input: Optional[Multiset] = None,
    budget: Optional[Budget] = None,
    settings: Optional[SearchSettings] = None,
) -> TableDecision:
    """
    Accept iff some outer branch sends out `yes` with a positive query; otherwise
    Reject iff some branch sends out `no` consistently; otherwise InvalidRecognizer.
    """
    spec = inject_input(spec, input)
    budget = budget if budget is not None else Budget()
    procedure = _TableProcedure(spec, budget, settings or SearchSettings())
    logger.info(f"Table decision started: {spec.summary()}")
    result = explore(procedure, accept=_emits_yes, budget=budget, on_leaf=procedure.on_leaf)
    if result.accepted:
        verdict = Verdict.ACCEPT
    elif procedure.consistent_no:
        verdict = Verdict.REJECT
    else:
        verdict = Verdict.INVALID_RECOGNIZER
    logger.info(
        f"Table verdict {verdict} after {result.leaves} leaves, {result.nodes} nodes, "
        f"{procedure.stats.queries} queries ({procedure.stats.cache_hits} cached)"
    )
    return TableDecision(
        verdict=verdict,
        witness=result.witness,
        outcome=result.result,
        leaves=result.leaves,
        nodes=result.nodes,
        stats=procedure.stats,
    )


def replay_table(
    spec: SystemSpec,
    witness: Witness,
    input: Optional[Multiset] = None,
    budget: Optional[Budget] = None,
    settings: Optional[SearchSettings] = None,
) -> TableDecision:
    """
    Re-run one recorded branch. Accept when it sends out `yes` consistently, Reject
    otherwise; replay errors propagate.
    """
    spec = inject_input(spec, input)
    budget = budget if budget is not None else Budget()
    procedure = _TableProcedure(spec, budget, settings or SearchSettings())
    result = replay(procedure, witness, accept=_emits_yes, budget=budget)
    return TableDecision(
        verdict=Verdict.ACCEPT if result.accepted else Verdict.REJECT,
        witness=result.witness,
        outcome=result.result,
        leaves=result.leaves,
        nodes=result.nodes,
        stats=procedure.stats,
    )
