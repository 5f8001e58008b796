"""Seeded random shallow systems for corpus testing."""

from __future__ import annotations

import random
import string
from typing import List

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.config import NO, YES
from psys_oracle.domain.model import (
    Charge,
    DivideRule,
    EvolveRule,
    InnerMembrane,
    Rule,
    SendInRule,
    SendOutRule,
    SystemSpec,
    validate_system,
)
from psys_oracle.domain.multiset import Multiset

SKIN = "h"
CHARGES = tuple(Charge)


class GenParams(BaseModel):
    seed: int = 1
    max_inner: int = Field(2, ge=0)
    max_objects: int = Field(4, ge=1, le=len(string.ascii_lowercase))
    max_rules: int = Field(8, ge=2)
    bound: int = Field(4, ge=1)


class _Builder:
    def __init__(self, params: GenParams):
        self.params = params
        self.rng = random.Random(params.seed)
        rng = self.rng
        self.inner = [f"k{i}" for i in range(1, rng.randint(0, params.max_inner) + 1)]
        self.objects = list(string.ascii_lowercase[: rng.randint(1, params.max_objects)])
        self.products = self.objects + [YES, NO]

    def charge(self) -> Charge:
        return self.rng.choice(CHARGES)

    def obj(self) -> str:
        return self.rng.choice(self.objects)

    def product(self) -> str:
        return self.rng.choice(self.products)

    def result_rule(self, result: str) -> Rule:
        trigger = self.rng.choice(self.objects + [result])
        return SendOutRule(
            label=SKIN,
            charge=self.rng.choice((Charge.NEUTRAL, self.charge())),
            obj=trigger,
            new_charge=self.charge(),
            result=result,
        )

    def random_rule(self) -> Rule:
        rng = self.rng
        kinds = ["evolve", "send_out"] + (["send_in", "divide"] if self.inner else [])
        kind = rng.choice(kinds)
        if kind in ("send_in", "divide"):
            label = rng.choice(self.inner)
        else:
            label = rng.choice([SKIN, *self.inner])
        charge = self.charge()
        if kind == "evolve":
            rhs = Multiset([self.product() for _ in range(rng.randint(0, 2))])
            return EvolveRule(label=label, charge=charge, obj=self.obj(), rhs=rhs)
        if kind == "send_in":
            return SendInRule(
                label=label,
                charge=charge,
                obj=self.obj(),
                new_charge=self.charge(),
                result=self.obj(),
            )
        if kind == "send_out":
            return SendOutRule(
                label=label,
                charge=charge,
                obj=self.obj(),
                new_charge=self.charge(),
                result=self.product(),
            )
        return DivideRule(
            label=label,
            charge=charge,
            obj=self.obj(),
            first_charge=self.charge(),
            first=self.obj(),
            second_charge=self.charge(),
            second=self.obj(),
        )

    def contents(self, symbols: List[str], low: int, high: int) -> Multiset:
        return Multiset([self.rng.choice(symbols) for _ in range(self.rng.randint(low, high))])

    def build(self) -> SystemSpec:
        rules: List[Rule] = [self.result_rule(YES), self.result_rule(NO)]
        for _ in range(self.rng.randint(0, self.params.max_rules - 2)):
            rule = self.random_rule()
            if rule not in rules:
                rules.append(rule)

        mentioned = sorted({s for rule in rules for s in rule.symbols()} - {YES, NO})
        if not mentioned:
            mentioned = [YES]
        alphabet = tuple(sorted(set(mentioned) | {YES, NO}))
        return validate_system(
            SystemSpec(
                alphabet=alphabet,
                labels=(SKIN, *self.inner),
                skin=SKIN,
                skin_init=self.contents(mentioned, 1, 2),
                inner_init=tuple(
                    InnerMembrane(label=label, contents=self.contents(mentioned, 0, 2))
                    for label in self.inner
                ),
                rules=tuple(rules),
                bound=self.params.bound,
            )
        )


def generate_system(params: GenParams) -> SystemSpec:
    """Deterministic in `params.seed`; recognizer validity is not guaranteed."""
    spec = _Builder(params).build()
    logger.debug(f"Generated system for seed {params.seed}: {spec.summary()}")
    return spec
