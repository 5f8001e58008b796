"""
Ground-truth decider: depth-first search over every computation of length at most T.

Each configuration is summarised once per time step (memoised on `(configuration, t)`):
which outcome kinds are reachable below it, how many computations it roots and one
witnessing step sequence per outcome kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from loguru import logger

from psys_oracle.config import RESULT_OBJECTS, YES
from psys_oracle.domain.configuration import Configuration, initial_configuration
from psys_oracle.domain.model import SystemSpec
from psys_oracle.domain.multiset import Multiset
from psys_oracle.domain.rulebook import RuleBook
from psys_oracle.engine.steps import StepTrace, transitions
from psys_oracle.search.choice import Budget, ChoicePoint, RandomChooser

RUN_STEP = "run.step"


class Verdict(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    INVALID_RECOGNIZER = "InvalidRecognizer"
    BOUND_EXCEEDED = "BoundExceeded"

    def __str__(self) -> str:
        return self.value


class Outcome(str, Enum):
    """How one computation ends."""

    ACCEPT = "Accept"
    REJECT = "Reject"
    BOUND_EXCEEDED = "BoundExceeded"
    MISSING_RESULT = "MissingResult"
    EARLY_RESULT = "EarlyResult"
    MULTIPLE_RESULTS = "MultipleResults"

    def __str__(self) -> str:
        return self.value


VIOLATIONS = (
    Outcome.BOUND_EXCEEDED,
    Outcome.MISSING_RESULT,
    Outcome.EARLY_RESULT,
    Outcome.MULTIPLE_RESULTS,
)
INVALID = (Outcome.MISSING_RESULT, Outcome.EARLY_RESULT, Outcome.MULTIPLE_RESULTS)

Trace = Tuple[StepTrace, ...]


@dataclass
class _Summary:
    computations: int = 0
    witnesses: Dict[Outcome, Trace] = field(default_factory=dict)

    def absorb(self, other: "_Summary", step: StepTrace, drop: Tuple[Outcome, ...] = ()):
        self.computations += other.computations
        for outcome, trace in other.witnesses.items():
            if outcome not in drop and outcome not in self.witnesses:
                self.witnesses[outcome] = (step, *trace)


@dataclass(frozen=True)
class ExhaustiveDecision:
    verdict: Verdict
    trace: Trace = ()
    computations: int = 0
    configurations: int = 0
    outcomes: Tuple[Outcome, ...] = ()


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    computations: int
    bound: int
    violations: Dict[Outcome, Trace] = field(default_factory=dict)

    def kinds(self) -> List[Outcome]:
        return sorted(self.violations, key=lambda o: VIOLATIONS.index(o))


def result_count(conf: Configuration) -> int:
    return sum(conf.env[symbol] for symbol in RESULT_OBJECTS)


def classify_halt(env: Multiset, emitted: int) -> Outcome:
    if emitted == 0:
        return Outcome.MISSING_RESULT
    if emitted > 1:
        return Outcome.MULTIPLE_RESULTS
    return Outcome.ACCEPT if env[YES] == 1 else Outcome.REJECT


class _Search:
    def __init__(self, spec: SystemSpec, bound: int, budget: Optional[Budget]):
        self.book = RuleBook(spec)
        self.bound = bound
        self.budget = budget if budget is not None else Budget()
        self.memo: Dict[Tuple[Configuration, int], _Summary] = {}

    def summarise(self, conf: Configuration, t: int) -> _Summary:
        key = (conf, t)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        self.budget.spend()

        summary = _Summary()
        moves = transitions(self.book, conf)
        emitted = result_count(conf)
        if not moves:
            summary.computations = 1
            summary.witnesses[classify_halt(conf.env, emitted)] = ()
        else:
            # a result already in the environment makes every continuation invalid
            if emitted:
                summary.witnesses[Outcome.EARLY_RESULT] = ()
            if t >= self.bound:
                summary.computations = 1
                summary.witnesses[Outcome.BOUND_EXCEEDED] = ()
            else:
                drop = (Outcome.ACCEPT, Outcome.REJECT) if emitted else ()
                for assignment, after in moves:
                    step = StepTrace(t, assignment, conf, after)
                    summary.absorb(self.summarise(after, t + 1), step, drop)
        self.memo[key] = summary
        return summary


def _verdict(witnesses: Dict[Outcome, Trace]) -> Verdict:
    if Outcome.ACCEPT in witnesses:
        return Verdict.ACCEPT
    if any(kind in witnesses for kind in INVALID):
        return Verdict.INVALID_RECOGNIZER
    if Outcome.BOUND_EXCEEDED in witnesses:
        return Verdict.BOUND_EXCEEDED
    return Verdict.REJECT


def decide_exhaustive(
    spec: SystemSpec,
    input: Optional[Multiset] = None,
    budget: Optional[Budget] = None,
) -> ExhaustiveDecision:
    """
    Accept iff some computation halts having sent exactly one `yes` out in its last
    step. Otherwise InvalidRecognizer if some computation breaks the recognizer
    contract, BoundExceeded if some computation is still running at T, else Reject.
    """
    logger.info(f"Exhaustive decision started: {spec.summary()}")
    search = _Search(spec, spec.bound, budget)
    summary = search.summarise(initial_configuration(spec, input), 0)
    verdict = _verdict(summary.witnesses)
    trace = summary.witnesses.get(Outcome.ACCEPT, ()) if verdict is Verdict.ACCEPT else ()
    if verdict is Verdict.REJECT:
        trace = summary.witnesses.get(Outcome.REJECT, ())
    logger.info(
        f"Exhaustive verdict {verdict} after {len(search.memo)} configuration(s), "
        f"{summary.computations} computation(s)"
    )
    return ExhaustiveDecision(
        verdict=verdict,
        trace=trace,
        computations=summary.computations,
        configurations=len(search.memo),
        outcomes=tuple(sorted(summary.witnesses, key=lambda o: list(Outcome).index(o))),
    )


def check_recognizer_validity(
    spec: SystemSpec,
    bound: Optional[int] = None,
    input: Optional[Multiset] = None,
    budget: Optional[Budget] = None,
) -> ValidityReport:
    """Every recognizer violation found within `bound` steps (default: the system's own bound)."""
    limit = spec.bound if bound is None else bound
    search = _Search(spec, limit, budget)
    summary = search.summarise(initial_configuration(spec, input), 0)
    violations = {kind: trace for kind, trace in summary.witnesses.items() if kind in VIOLATIONS}
    if violations:
        logger.debug(f"Recognizer violations: {', '.join(map(str, violations))}")
    return ValidityReport(
        valid=not violations,
        computations=summary.computations,
        bound=limit,
        violations=violations,
    )


def sample_computation(
    spec: SystemSpec,
    seed: int,
    input: Optional[Multiset] = None,
    budget: Optional[Budget] = None,
) -> Tuple[Trace, Outcome]:
    """Follow one computation, picking each successor with a seeded RandomChooser."""
    book = RuleBook(spec)
    chooser = RandomChooser(seed, budget)
    conf = initial_configuration(spec, input)
    trace: List[StepTrace] = []
    for t in range(spec.bound + 1):
        moves = transitions(book, conf)
        emitted = result_count(conf)
        if not moves:
            return tuple(trace), classify_halt(conf.env, emitted)
        if emitted:
            return tuple(trace), Outcome.EARLY_RESULT
        if t == spec.bound:
            break
        index = chooser.guess(ChoicePoint(RUN_STEP, 0, len(moves) - 1, time=t))
        assignment, after = moves[index]
        trace.append(StepTrace(t, assignment, conf, after))
        conf = after
    return tuple(trace), Outcome.BOUND_EXCEEDED
