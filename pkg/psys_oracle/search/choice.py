"""
Nondeterministic choice as a pluggable chooser.

Procedures are written once against `Chooser.guess` and executed under exhaustive
backtracking (`explore`), witness replay (`replay`) or seeded random sampling
(`sample`). Exhaustive search re-executes the procedure from the start for every
leaf of the choice tree, driven by a prefix of recorded values.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Generic, Iterable, List, Optional, Sequence, TypeVar

from loguru import logger
from pydantic import BaseModel, TypeAdapter

from psys_oracle.config import get_budget
from psys_oracle.exceptions import (
    BudgetExceeded,
    RejectedBranch,
    ReplayExhausted,
    ReplayMismatch,
    ReplayOutOfRange,
)

R = TypeVar("R")


@dataclass(frozen=True)
class ChoicePoint:
    """A guess site: `tag` names the algorithm step, values range over [lo, hi]."""

    tag: str
    lo: int
    hi: int
    rule: Optional[int] = None
    time: Optional[int] = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty choice range [{self.lo}, {self.hi}] at {self.tag}")

    def same_site(self, other: "ChoicePoint") -> bool:
        return self.tag == other.tag and self.rule == other.rule and self.time == other.time


@dataclass(frozen=True)
class Choice:
    point: ChoicePoint
    value: int


class WitnessRecord(BaseModel):
    tag: str
    lo: int
    hi: int
    value: int
    rule: Optional[int] = None
    time: Optional[int] = None


_RECORDS = TypeAdapter(List[WitnessRecord])


@dataclass(frozen=True)
class Witness:
    """Ordered guess values certifying one run."""

    choices: tuple[Choice, ...] = ()

    def __len__(self) -> int:
        return len(self.choices)

    def values(self) -> List[int]:
        return [c.value for c in self.choices]

    def tagged(self, tag: str) -> List[Choice]:
        return [c for c in self.choices if c.point.tag == tag]

    def records(self) -> List[WitnessRecord]:
        return [
            WitnessRecord(
                tag=c.point.tag,
                lo=c.point.lo,
                hi=c.point.hi,
                value=c.value,
                rule=c.point.rule,
                time=c.point.time,
            )
            for c in self.choices
        ]

    def to_json(self) -> str:
        return json.dumps(
            [r.model_dump(exclude_none=True) for r in self.records()], indent=2
        )

    @classmethod
    def from_json(cls, text: str) -> "Witness":
        records = _RECORDS.validate_json(text)
        return cls(
            tuple(
                Choice(ChoicePoint(r.tag, r.lo, r.hi, r.rule, r.time), r.value)
                for r in records
            )
        )

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Witness":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


class Budget:
    """Shared node counter; every guess (or visited configuration) spends one unit."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit if limit is not None else get_budget()
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            logger.warning(f"Node budget of {self.limit} exhausted")
            raise BudgetExceeded(f"node budget of {self.limit} exhausted")


class Chooser:
    """
    Base chooser. `trail` is the witness of the current run: every guess made plus
    any choices adopted from nested searches.
    """

    def __init__(self, budget: Optional[Budget] = None):
        self.budget = budget if budget is not None else Budget()
        self.trail: List[Choice] = []

    def _pick(self, point: ChoicePoint) -> int:
        raise NotImplementedError

    def guess(self, point: ChoicePoint) -> int:
        self.budget.spend()
        value = self._pick(point)
        self.trail.append(Choice(point, value))
        return value

    def adopt(self, choices: Iterable[Choice]) -> None:
        self.trail.extend(choices)

    def witness(self) -> Witness:
        return Witness(tuple(self.trail))


class ExhaustiveChooser(Chooser):
    """Follows `prefix`, then takes `lo` at every fresh point."""

    def __init__(self, prefix: Sequence[int] = (), budget: Optional[Budget] = None):
        super().__init__(budget)
        self.prefix = list(prefix)
        self.path: List[Choice] = []

    def _pick(self, point: ChoicePoint) -> int:
        position = len(self.path)
        if position < len(self.prefix):
            value = self.prefix[position]
        else:
            value = point.lo
        self.path.append(Choice(point, value))
        return value

    def next_prefix(self) -> Optional[List[int]]:
        """Prefix of the next leaf in ascending order, None once the tree is exhausted."""
        path = list(self.path)
        while path and path[-1].value >= path[-1].point.hi:
            path.pop()
        if not path:
            return None
        values = [c.value for c in path]
        values[-1] += 1
        return values


class ReplayChooser(Chooser):
    """Answers every guess from a recorded witness."""

    def __init__(self, witness: Witness | Sequence[Choice], budget: Optional[Budget] = None):
        super().__init__(budget)
        self.recorded = list(witness.choices if isinstance(witness, Witness) else witness)
        self.position = 0

    def _pick(self, point: ChoicePoint) -> int:
        if self.position >= len(self.recorded):
            raise ReplayExhausted(
                f"witness holds {len(self.recorded)} choices; run asked for more at {point.tag}"
            )
        recorded = self.recorded[self.position]
        if not recorded.point.same_site(point):
            raise ReplayMismatch(
                f"choice {self.position} was recorded at {recorded.point.tag} "
                f"(rule={recorded.point.rule}, t={recorded.point.time}); "
                f"run is at {point.tag} (rule={point.rule}, t={point.time})"
            )
        if not point.lo <= recorded.value <= point.hi:
            raise ReplayOutOfRange(
                f"choice {self.position} at {point.tag} is {recorded.value}, "
                f"outside [{point.lo}, {point.hi}]"
            )
        self.position += 1
        return recorded.value

    def finish(self) -> None:
        if self.position != len(self.recorded):
            raise ReplayMismatch(
                f"run finished after {self.position} of {len(self.recorded)} recorded choices"
            )


class RandomChooser(Chooser):
    """Seeded uniform choices; smoke runs only."""

    def __init__(self, seed: int, budget: Optional[Budget] = None):
        super().__init__(budget)
        self.rng = random.Random(seed)

    def _pick(self, point: ChoicePoint) -> int:
        return self.rng.randint(point.lo, point.hi)


@dataclass
class ExploreResult(Generic[R]):
    accepted: bool
    witness: Optional[Witness] = None
    leaves: int = 0
    nodes: int = 0
    result: Optional[R] = None
    outcomes: List[Any] = field(default_factory=list)


def guess(chooser: Chooser, point: ChoicePoint) -> int:
    return chooser.guess(point)


def explore(
    procedure: Callable[[Chooser], R],
    accept: Callable[[R], bool] = bool,
    budget: Optional[Budget] = None,
    on_leaf: Optional[Callable[[Optional[R], bool], None]] = None,
) -> ExploreResult[R]:
    """
    Complete backtracking over the choice tree of `procedure`, values ascending.

    Returns at the first accepting leaf with its witness. A leaf that raises
    RejectedBranch counts as rejecting. BudgetExceeded propagates.
    """
    budget = budget if budget is not None else Budget()
    start = budget.used
    prefix: Optional[List[int]] = []
    leaves = 0
    while prefix is not None:
        chooser = ExhaustiveChooser(prefix, budget)
        result: Optional[R]
        try:
            result = procedure(chooser)
            accepted = accept(result)
        except RejectedBranch:
            result = None
            accepted = False
        leaves += 1
        if on_leaf is not None:
            on_leaf(result, accepted)
        if accepted:
            return ExploreResult(
                accepted=True,
                witness=chooser.witness(),
                leaves=leaves,
                nodes=budget.used - start,
                result=result,
            )
        prefix = chooser.next_prefix()
    return ExploreResult(accepted=False, leaves=leaves, nodes=budget.used - start)


def replay(
    procedure: Callable[[Chooser], R],
    witness: Witness,
    accept: Callable[[R], bool] = bool,
    budget: Optional[Budget] = None,
) -> ExploreResult[R]:
    """Re-run `procedure` on the recorded choices; every choice must be consumed."""
    budget = budget if budget is not None else Budget()
    chooser = ReplayChooser(witness, budget)
    result: Optional[R]
    try:
        result = procedure(chooser)
        accepted = accept(result)
    except RejectedBranch:
        result = None
        accepted = False
    if accepted:
        chooser.finish()
    return ExploreResult(
        accepted=accepted,
        witness=chooser.witness() if accepted else None,
        leaves=1,
        nodes=chooser.position,
        result=result,
    )


def sample(
    procedure: Callable[[Chooser], R],
    seed: int,
    runs: int = 1,
    accept: Callable[[R], bool] = bool,
    budget: Optional[Budget] = None,
) -> ExploreResult[R]:
    """Run `procedure` `runs` times under seeded random choices."""
    budget = budget if budget is not None else Budget()
    start = budget.used
    found: Optional[ExploreResult[R]] = None
    outcomes: List[Any] = []
    for run in range(runs):
        chooser = RandomChooser(seed + run, budget)
        result: Optional[R]
        try:
            result = procedure(chooser)
            accepted = accept(result)
        except RejectedBranch:
            result = None
            accepted = False
        outcomes.append(result)
        if accepted and found is None:
            found = ExploreResult(True, chooser.witness(), result=result)
    logger.debug(f"Sampled {runs} run(s) from seed {seed}")
    return ExploreResult(
        accepted=found is not None,
        witness=found.witness if found is not None else None,
        leaves=runs,
        nodes=budget.used - start,
        result=found.result if found is not None else None,
        outcomes=outcomes,
    )
