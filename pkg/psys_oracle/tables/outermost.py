"""
Simulation of the skin membrane alone.

Inner membranes are never represented: their communication with the skin is guessed
per rule and step into an `InteractionTable`, and skin objects left idle are recorded
in an `UnusedTable`. Both tables are later checked by the inner query.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from loguru import logger

from psys_oracle.config import NO, YES
from psys_oracle.domain.model import Charge, SystemSpec
from psys_oracle.domain.multiset import EMPTY, Multiset
from psys_oracle.domain.rulebook import RuleBook
from psys_oracle.exceptions import RejectedBranch
from psys_oracle.search.choice import ChoicePoint, Chooser
from psys_oracle.tables.settings import SearchSettings
from psys_oracle.tables.tables import (
    OUTER_ENV,
    OUTER_EVOLVE,
    OUTER_SENDIN,
    OUTER_SENDOUT,
    InteractionTable,
    UnusedTable,
    compute_guess_cap,
)


@dataclass(frozen=True)
class OuterState:
    w: Multiset
    env: Multiset = EMPTY
    charge: Charge = Charge.NEUTRAL
    t: int = 0

    @classmethod
    def initial(cls, spec: SystemSpec) -> "OuterState":
        return cls(w=spec.skin_init)


class Emission(str, Enum):
    EMIT_YES = "EmitYes"
    EMIT_NO = "EmitNo"
    REJECTED = "RejectedBranch"

    def __str__(self) -> str:
        return self.value


@dataclass
class OuterRunOutcome:
    result: Emission
    halt_time: int
    interactions: InteractionTable
    unused: UnusedTable
    state: Optional[OuterState] = None


def _reject(reason: str, t: int) -> RejectedBranch:
    logger.debug(f"Outer branch rejected at step {t}: {reason}")
    return RejectedBranch(reason)


def simulate_outer_step(
    state: OuterState,
    book: RuleBook,
    interactions: InteractionTable,
    unused: UnusedTable,
    chooser: Chooser,
    settings: Optional[SearchSettings] = None,
) -> OuterState:
    """
    One step of the skin. Every guess range is read from the pre-step contents; the
    markings are applied together at the end.
    """
    settings = settings or SearchSettings()
    t, w, skin, charge = state.t, state.w, book.skin, state.charge
    cap = compute_guess_cap(book.m, t)
    removed: Counter = Counter()
    added: Counter = Counter()
    label_load: Counter = Counter()

    def bounded(label: str, hi: int) -> int:
        if settings.label_caps:
            hi = min(hi, book.label_cap(label, t) - label_load[label])
        return max(hi, 0)

    def mark_removed(symbol: str, count: int) -> None:
        removed[symbol] += count
        if removed[symbol] > w[symbol]:
            raise _reject(f"{removed[symbol]} x {symbol!r} marked, only {w[symbol]} present", t)

    for rule in book.inner_send_in:
        if w[rule.obj] == 0:
            continue
        hi = min(w[rule.obj], cap)
        if settings.cumulative_sendin_prune:
            hi = min(hi, w[rule.obj] - removed[rule.obj])
        hi = bounded(rule.label, hi)
        count = chooser.guess(ChoicePoint(OUTER_SENDIN, 0, hi, rule.ordinal, t))
        interactions.set(rule.ordinal, t, count)
        label_load[rule.label] += count
        mark_removed(rule.obj, count)

    for rule in book.inner_send_out:
        hi = bounded(rule.label, cap)
        count = chooser.guess(ChoicePoint(OUTER_SENDOUT, 0, hi, rule.ordinal, t))
        interactions.set(rule.ordinal, t, count)
        label_load[rule.label] += count
        added[rule.result] += count

    for rule in book.evolve(skin, charge):
        if w[rule.obj] == 0:
            continue
        count = chooser.guess(ChoicePoint(OUTER_EVOLVE, 0, w[rule.obj], rule.ordinal, t))
        if count:
            mark_removed(rule.obj, count)
            for symbol, n in rule.rhs.items():
                added[symbol] += n * count

    env, new_charge, blocked = state.env, charge, False
    for rule in book.send_out(skin, charge):
        if w[rule.obj] == 0:
            continue
        if chooser.guess(ChoicePoint(OUTER_ENV, 0, 1, rule.ordinal, t)):
            mark_removed(rule.obj, 1)
            env = env + Multiset.of(rule.result)
            new_charge = rule.new_charge
            blocked = True
            break

    idle = w - Multiset(removed)
    for symbol in book.alphabet:
        unused.set(symbol, t, idle[symbol])
    for symbol in idle.support():
        if book.evolves(skin, charge, symbol):
            raise _reject(f"idle {symbol!r} could evolve in the skin", t)
        if not blocked and any(r.obj == symbol for r in book.send_out(skin, charge)):
            raise _reject(f"idle {symbol!r} could leave the unblocked skin", t)

    return OuterState(
        w=w.apply(add=added, remove=removed),
        env=env,
        charge=new_charge,
        t=t + 1,
    )


def skin_quiescent(state: OuterState, book: RuleBook) -> bool:
    """No skin evolution or send-out is enabled in `state`."""
    skin = book.skin
    return not any(
        state.w[rule.obj] > 0
        for rule in (*book.evolve(skin, state.charge), *book.send_out(skin, state.charge))
    )


def run_outermost(
    spec: SystemSpec,
    chooser: Chooser,
    settings: Optional[SearchSettings] = None,
    book: Optional[RuleBook] = None,
) -> OuterRunOutcome:
    """
    Simulate the skin for t = 0 .. T-1 until `yes` or `no` reaches the environment.

    The emission step must leave the skin with nothing left to do; the inner side of
    halting and the tables themselves are checked by the query.
    """
    book = book or RuleBook(spec)
    settings = settings or SearchSettings()
    interactions, unused = InteractionTable(), UnusedTable()
    state = OuterState.initial(spec)
    for t in range(spec.bound):
        state = simulate_outer_step(state, book, interactions, unused, chooser, settings)
        if state.env[YES] or state.env[NO]:
            if not skin_quiescent(state, book):
                raise _reject("skin still active after the result was sent out", t)
            result = Emission.EMIT_YES if state.env[YES] else Emission.EMIT_NO
            logger.debug(f"Outer branch emits {result} at step {t}")
            return OuterRunOutcome(result, t, interactions, unused, state)
    raise _reject("no result within the bound", spec.bound)
