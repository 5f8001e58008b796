"""
Maximally parallel steps over full configurations.

An assignment is built per membrane: each membrane gets a `MembranePlan` (at most one
blocking rule plus a distribution of its remaining objects over evolution rules).
Identical inner instances share one list of local plans and are given a multiset of
plans, so symmetric assignments are produced once.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from loguru import logger

from psys_oracle.domain.configuration import Configuration, MembraneInstance, make_inner_bag
from psys_oracle.domain.model import DivideRule, EvolveRule, Rule, SendInRule, SendOutRule
from psys_oracle.domain.multiset import Multiset
from psys_oracle.domain.rulebook import RuleBook

EvolveCounts = Tuple[Tuple[EvolveRule, int], ...]


@dataclass(frozen=True)
class MembranePlan:
    blocking: Optional[Rule] = None
    evolve: EvolveCounts = ()

    def consumed(self) -> Multiset:
        """Objects taken from the membrane's own contents."""
        counts: Counter = Counter()
        for rule, count in self.evolve:
            counts[rule.obj] += count
        if isinstance(self.blocking, (SendOutRule, DivideRule)):
            counts[self.blocking.obj] += 1
        return Multiset(counts)

    def produced(self) -> Multiset:
        """Objects written back into the membrane by evolution."""
        counts: Counter = Counter()
        for rule, count in self.evolve:
            for symbol, n in rule.rhs.items():
                counts[symbol] += n * count
        return Multiset(counts)

    def applications(self) -> List[Tuple[Rule, int]]:
        pairs: List[Tuple[Rule, int]] = list(self.evolve)
        if self.blocking is not None:
            pairs.append((self.blocking, 1))
        return sorted(pairs, key=lambda pair: pair[0].ordinal)

    def is_idle(self) -> bool:
        return self.blocking is None and not self.evolve


EMPTY_PLAN = MembranePlan()

PlanBag = Tuple[Tuple[MembranePlan, int], ...]


@dataclass(frozen=True)
class RuleAssignment:
    """One maximal choice of rule applications for a whole configuration."""

    skin: MembranePlan
    inner: Tuple[Tuple[MembraneInstance, PlanBag], ...] = ()

    def plans(self) -> Iterator[Tuple[MembraneInstance, MembranePlan, int]]:
        for instance, bag in self.inner:
            for plan, count in bag:
                yield instance, plan, count

    def send_in_demand(self) -> Multiset:
        """Skin objects carried into inner membranes by send-in rules."""
        counts: Counter = Counter()
        for _, plan, count in self.plans():
            if isinstance(plan.blocking, SendInRule):
                counts[plan.blocking.obj] += count
        return Multiset(counts)

    def rule_counts(self, skin_label: str) -> Dict[Tuple[str, int], int]:
        """Applications per (membrane label, rule ordinal)."""
        counts: Dict[Tuple[str, int], int] = Counter()
        for rule, n in self.skin.applications():
            counts[(skin_label, rule.ordinal)] += n
        for instance, plan, count in self.plans():
            for rule, n in plan.applications():
                counts[(instance.label, rule.ordinal)] += n * count
        return dict(sorted(counts.items(), key=lambda item: (item[0][1], item[0][0])))

    def is_empty(self) -> bool:
        return self.skin.is_idle() and all(plan.is_idle() for _, plan, _ in self.plans())


@dataclass(frozen=True)
class StepTrace:
    time: int
    assignment: RuleAssignment
    before: Configuration
    after: Configuration


def applicable_rules(
    book: RuleBook, conf: Configuration, slot: Optional[MembraneInstance] = None
) -> List[Rule]:
    """
    Rules enabled in one membrane: the skin when `slot` is None, else an inner instance.

    Send-in rules need their trigger in the skin; division is only offered to inner
    membranes.
    """
    instance = conf.skin if slot is None else slot
    label, charge, contents = instance.label, instance.charge, instance.contents
    rules: List[Rule] = [r for r in book.evolve(label, charge) if r.obj in contents]
    rules += [r for r in book.send_out(label, charge) if r.obj in contents]
    if slot is not None:
        rules += [r for r in book.send_in(label, charge) if r.obj in conf.skin.contents]
        rules += [r for r in book.divide(label, charge) if r.obj in contents]
    return sorted(rules, key=lambda r: r.ordinal)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _evolve_distributions(
    book: RuleBook, label: str, charge, free: Multiset
) -> List[EvolveCounts]:
    """Every way to rewrite all evolvable copies in `free`; other objects stay idle."""
    rules = book.evolve(label, charge)
    groups = []
    for symbol, count in free.items():
        matching = [r for r in rules if r.obj == symbol]
        if matching:
            groups.append(
                [tuple(zip(matching, split)) for split in _compositions(count, len(matching))]
            )
    distributions = []
    for combo in itertools.product(*groups):
        pairs = sorted(
            (pair for part in combo for pair in part if pair[1] > 0),
            key=lambda pair: pair[0].ordinal,
        )
        distributions.append(tuple(pairs))
    return distributions


def _local_plans(
    book: RuleBook, instance: MembraneInstance, free: Multiset, inner: bool
) -> List[MembranePlan]:
    label, charge = instance.label, instance.charge
    options: List[Optional[Rule]] = [None]
    options += [r for r in book.send_out(label, charge) if r.obj in free]
    if inner:
        options += [r for r in book.divide(label, charge) if r.obj in free]
        # trigger availability in the skin is settled globally
        options += book.send_in(label, charge)

    plans = []
    for blocking in options:
        remaining = free
        if isinstance(blocking, (SendOutRule, DivideRule)):
            remaining = free - Multiset.of(blocking.obj)
        for evolve in _evolve_distributions(book, label, charge, remaining):
            plan = MembranePlan(blocking, evolve)
            if blocking is None:
                idle = remaining - plan.consumed()
                if any(book.blocks_on(label, charge, symbol) for symbol in idle.support()):
                    continue
            plans.append(plan)
    return plans


def _plan_bags(plans: Sequence[MembranePlan], count: int) -> List[PlanBag]:
    bags = []
    for picked in itertools.combinations_with_replacement(range(len(plans)), count):
        tally = Counter(picked)
        bags.append(tuple((plans[i], n) for i, n in sorted(tally.items())))
    return bags


def enumerate_maximal_assignments(book: RuleBook, conf: Configuration) -> List[RuleAssignment]:
    """
    All maximal assignments of `conf`, identical inner instances taken up to symmetry.

    Empty for a halted configuration.
    """
    per_instance = []
    for instance, count in conf.inner:
        plans = _local_plans(book, instance, instance.contents, inner=True)
        per_instance.append([(instance, bag) for bag in _plan_bags(plans, count)])

    skin = conf.skin
    assignments: List[RuleAssignment] = []
    for inner in itertools.product(*per_instance):
        partial = RuleAssignment(EMPTY_PLAN, tuple(inner))
        demand = partial.send_in_demand()
        if not demand <= skin.contents:
            continue
        available = skin.contents - demand
        for skin_plan in _local_plans(book, skin, available, inner=False):
            idle = available - skin_plan.consumed()
            if _send_in_left_out(book, partial, idle):
                continue
            assignment = RuleAssignment(skin_plan, tuple(inner))
            if not assignment.is_empty():
                assignments.append(assignment)
    return assignments


def _send_in_left_out(book: RuleBook, assignment: RuleAssignment, skin_idle: Multiset) -> bool:
    for instance, plan, _ in assignment.plans():
        if plan.blocking is None:
            for rule in book.send_in(instance.label, instance.charge):
                if skin_idle[rule.obj] > 0:
                    return True
    return False


def is_maximal(book: RuleBook, conf: Configuration, assignment: RuleAssignment) -> bool:
    """Direct check: resources suffice and no single further rule instance fits."""
    skin = conf.skin
    skin_used = assignment.skin.consumed() + assignment.send_in_demand()
    if not skin_used <= skin.contents:
        return False
    if isinstance(assignment.skin.blocking, (SendInRule, DivideRule)):
        return False
    skin_idle = skin.contents - skin_used
    for symbol in skin_idle.support():
        if book.evolves(skin.label, skin.charge, symbol):
            return False
        if assignment.skin.blocking is None and any(
            r.obj == symbol for r in book.send_out(skin.label, skin.charge)
        ):
            return False

    bag = dict(conf.inner)
    if {instance for instance, _ in assignment.inner} != set(bag):
        return False
    for instance, plans in assignment.inner:
        if bag.get(instance) != sum(n for _, n in plans):
            return False
        for plan, _ in plans:
            if not plan.consumed() <= instance.contents:
                return False
            idle = instance.contents - plan.consumed()
            for symbol in idle.support():
                if book.evolves(instance.label, instance.charge, symbol):
                    return False
                if plan.blocking is None and book.blocks_on(
                    instance.label, instance.charge, symbol
                ):
                    return False
    return not _send_in_left_out(book, assignment, skin_idle)


def apply_assignment(conf: Configuration, assignment: RuleAssignment) -> Configuration:
    """
    Execute one step. Evolution results are written before division copies contents,
    so both children see the rewritten objects.
    """
    skin_plan = assignment.skin
    skin_charge = conf.skin.charge
    env = conf.env
    skin_add: Counter = Counter(dict(skin_plan.produced().items()))
    if isinstance(skin_plan.blocking, SendOutRule):
        env = env + Multiset.of(skin_plan.blocking.result)
        skin_charge = skin_plan.blocking.new_charge

    inner: Counter = Counter()
    for instance, plan, count in assignment.plans():
        contents = instance.contents.apply(add=plan.produced(), remove=plan.consumed())
        rule = plan.blocking
        if rule is None:
            inner[MembraneInstance(instance.label, instance.charge, contents)] += count
        elif isinstance(rule, SendInRule):
            entered = contents + Multiset.of(rule.result)
            inner[MembraneInstance(instance.label, rule.new_charge, entered)] += count
        elif isinstance(rule, SendOutRule):
            inner[MembraneInstance(instance.label, rule.new_charge, contents)] += count
            skin_add[rule.result] += count
        elif isinstance(rule, DivideRule):
            first = contents + Multiset.of(rule.first)
            second = contents + Multiset.of(rule.second)
            inner[MembraneInstance(instance.label, rule.first_charge, first)] += count
            inner[MembraneInstance(instance.label, rule.second_charge, second)] += count

    skin_contents = conf.skin.contents.apply(
        add=skin_add, remove=skin_plan.consumed() + assignment.send_in_demand()
    )
    return Configuration(
        env=env,
        skin=MembraneInstance(conf.skin.label, skin_charge, skin_contents),
        inner=make_inner_bag(inner),
    )


def transitions(
    book: RuleBook, conf: Configuration
) -> List[Tuple[RuleAssignment, Configuration]]:
    """(assignment, successor) pairs, one per distinct successor configuration."""
    seen: Set[Configuration] = set()
    result = []
    for assignment in enumerate_maximal_assignments(book, conf):
        after = apply_assignment(conf, assignment)
        if after not in seen:
            seen.add(after)
            result.append((assignment, after))
    logger.debug(f"{len(result)} successor(s) of {conf.render()}")
    return result


def successors(book: RuleBook, conf: Configuration) -> Set[Configuration]:
    return {after for _, after in transitions(book, conf)}


def is_halted(book: RuleBook, conf: Configuration) -> bool:
    return not enumerate_maximal_assignments(book, conf)

