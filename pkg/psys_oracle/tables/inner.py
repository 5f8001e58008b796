"""
The query: is there a halting computation of the inner membranes, up to the emission
step t, whose skin communication matches the guessed tables exactly?

Membranes are simulated one at a time from an explicit stack. A division keeps
simulating the first child and pushes the second, whose step of birth has already
been simulated together with its parent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import List, Optional

from loguru import logger

from psys_oracle.domain.model import Charge, DivideRule, SystemSpec
from psys_oracle.domain.multiset import Multiset
from psys_oracle.domain.rulebook import RuleBook
from psys_oracle.exceptions import RejectedBranch
from psys_oracle.search.choice import ChoicePoint, Chooser
from psys_oracle.tables.settings import SearchSettings
from psys_oracle.tables.tables import (
    INNER_DIVIDE,
    INNER_EVOLVE,
    INNER_SENDIN,
    INNER_SENDOUT,
    InteractionTable,
    UnusedTable,
)


@dataclass(frozen=True)
class StackEntry:
    w: Multiset
    label: str
    charge: Charge
    t_push: int
    divided: bool = False

    @property
    def first_step(self) -> int:
        return self.t_push + 1 if self.divided else self.t_push


class InnerStack:
    def __init__(self, entries: Optional[List[StackEntry]] = None):
        self.entries: List[StackEntry] = list(entries or [])
        self.peak = len(self.entries)

    def push(self, entry: StackEntry) -> None:
        self.entries.append(entry)
        self.peak = max(self.peak, len(self.entries))

    def pop(self) -> StackEntry:
        return self.entries.pop()

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass
class QueryStats:
    queries: int = 0
    cache_hits: int = 0
    peak_stack: int = 0
    bound_violations: int = 0


def init_stack(spec: SystemSpec) -> InnerStack:
    """One neutral entry per initial inner membrane; the first membrane is popped first."""
    return InnerStack(
        [
            StackEntry(inner.contents, inner.label, Charge.NEUTRAL, 0)
            for inner in reversed(spec.inner_init)
        ]
    )


def _reject(reason: str, label: str, t: int) -> RejectedBranch:
    logger.debug(f"Query branch rejected: membrane {label} at step {t}: {reason}")
    return RejectedBranch(reason)


def simulate_inner_membrane(
    entry: StackEntry,
    t: int,
    book: RuleBook,
    interactions: InteractionTable,
    unused: UnusedTable,
    chooser: Chooser,
    stack: InnerStack,
    skin_residue: Multiset,
    settings: Optional[SearchSettings] = None,
) -> None:
    """
    Simulate one membrane from its first step through step t, decrementing
    `interactions` for every communication it performs, then require it to be halted.
    """
    settings = settings or SearchSettings()
    label, w, charge = entry.label, entry.w, entry.charge

    for step in range(entry.first_step, t + 1):
        removed: Counter = Counter()
        added: Counter = Counter()
        new_charge = charge
        blocking = None

        for phase in settings.phase_order:
            if blocking is not None:
                break
            if phase == "divide":
                for rule in book.divide(label, charge):
                    if w[rule.obj] and chooser.guess(
                        ChoicePoint(INNER_DIVIDE, 0, 1, rule.ordinal, step)
                    ):
                        removed[rule.obj] += 1
                        blocking = rule
                        break
            elif phase == "send_in":
                for rule in book.send_in(label, charge):
                    if settings.eager_overdraw and interactions.get(rule.ordinal, step) <= 0:
                        continue
                    if chooser.guess(ChoicePoint(INNER_SENDIN, 0, 1, rule.ordinal, step)):
                        interactions.add(rule.ordinal, step, -1)
                        added[rule.result] += 1
                        new_charge = rule.new_charge
                        blocking = rule
                        break
            elif phase == "send_out":
                for rule in book.send_out(label, charge):
                    if not w[rule.obj]:
                        continue
                    if settings.eager_overdraw and interactions.get(rule.ordinal, step) <= 0:
                        continue
                    if chooser.guess(ChoicePoint(INNER_SENDOUT, 0, 1, rule.ordinal, step)):
                        interactions.add(rule.ordinal, step, -1)
                        removed[rule.obj] += 1
                        new_charge = rule.new_charge
                        blocking = rule
                        break

        for rule in book.evolve(label, charge):
            if not w[rule.obj]:
                continue
            count = chooser.guess(ChoicePoint(INNER_EVOLVE, 0, w[rule.obj], rule.ordinal, step))
            if count:
                removed[rule.obj] += count
                if removed[rule.obj] > w[rule.obj]:
                    raise _reject(f"{rule.obj!r} over-consumed", label, step)
                for symbol, n in rule.rhs.items():
                    added[symbol] += n * count

        idle = w - Multiset(removed)
        for symbol in idle.support():
            if book.evolves(label, charge, symbol):
                raise _reject(f"idle {symbol!r} could evolve", label, step)
            if blocking is None and book.blocks_on(label, charge, symbol):
                raise _reject(f"idle {symbol!r} could trigger a blocking rule", label, step)
        if blocking is None:
            for rule in book.send_in(label, charge):
                if unused.get(rule.obj, step) > 0:
                    raise _reject(f"idle skin {rule.obj!r} could have entered", label, step)

        w = w.apply(add=added, remove=removed)
        if isinstance(blocking, DivideRule):
            stack.push(
                StackEntry(w + Multiset.of(blocking.second), label, blocking.second_charge, step, True)
            )
            w = w + Multiset.of(blocking.first)
            charge = blocking.first_charge
        else:
            charge = new_charge

    for symbol in w.support():
        if book.evolves(label, charge, symbol) or book.blocks_on(label, charge, symbol):
            raise _reject(f"not halted: {symbol!r} still enables a rule", label, t + 1)
    for rule in book.send_in(label, charge):
        if skin_residue[rule.obj] > 0:
            raise _reject(f"not halted: skin {rule.obj!r} could enter", label, t + 1)


def answer_query(
    spec: SystemSpec,
    interactions: InteractionTable,
    unused: UnusedTable,
    t: int,
    chooser: Chooser,
    skin_residue: Multiset,
    settings: Optional[SearchSettings] = None,
    book: Optional[RuleBook] = None,
    stats: Optional[QueryStats] = None,
) -> bool:
    """
    True on a branch where every inner membrane halts by step t and every table
    entry has been matched exactly (the copy ends identically zero).
    """
    book = book or RuleBook(spec)
    remaining = interactions.copy()
    stack = init_stack(spec)
    limit = spec.m + t
    try:
        while stack:
            entry = stack.pop()
            simulate_inner_membrane(
                entry, t, book, remaining, unused, chooser, stack, skin_residue, settings
            )
    finally:
        if stats is not None:
            stats.peak_stack = max(stats.peak_stack, stack.peak)
            if stack.peak > limit:
                stats.bound_violations += 1
                logger.error(f"Inner stack reached {stack.peak}, above its bound {limit}")
    return remaining.is_zero()
