"""
P system object model: charges, the four rule forms, and the system description.

Rules are frozen pydantic models discriminated by `kind`. Each rule carries its
ordinal (position in the rule list); ordinals are what tables, traces and
witnesses refer to.
"""

from __future__ import annotations

import re
from enum import Enum
from typing import Annotated, FrozenSet, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from psys_oracle.domain.multiset import EMPTY, Multiset
from psys_oracle.exceptions import (
    BadBound,
    DuplicateLabel,
    DuplicateSymbol,
    InvalidRuleTarget,
    InvalidSystemError,
    NotShallow,
    UnknownLabel,
    UnknownSymbol,
    UnplacedLabel,
)

TOKEN_PATTERN = re.compile(r"^[A-Za-z0-9_']+$")


class Charge(str, Enum):
    NEUTRAL = "0"
    POSITIVE = "+"
    NEGATIVE = "-"

    def __str__(self) -> str:
        return self.value


class RuleBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    charge: Charge
    obj: str
    ordinal: int = -1

    def symbols(self) -> FrozenSet[str]:
        return frozenset({self.obj})

    def notation(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.notation()


class EvolveRule(RuleBase):
    """[a -> w]_h^alpha"""

    kind: Literal["evolve"] = "evolve"
    rhs: Multiset = EMPTY

    def symbols(self) -> FrozenSet[str]:
        return frozenset({self.obj, *self.rhs.support()})

    def notation(self) -> str:
        return f"[{self.obj} -> {self.rhs.render()}]_{self.label}^{self.charge.value}"


class SendInRule(RuleBase):
    """a []_h^alpha -> [b]_h^beta"""

    kind: Literal["send_in"] = "send_in"
    new_charge: Charge
    result: str

    def symbols(self) -> FrozenSet[str]:
        return frozenset({self.obj, self.result})

    def notation(self) -> str:
        return (
            f"{self.obj} []_{self.label}^{self.charge.value} -> "
            f"[{self.result}]_{self.label}^{self.new_charge.value}"
        )


class SendOutRule(RuleBase):
    """[a]_h^alpha -> []_h^beta b"""

    kind: Literal["send_out"] = "send_out"
    new_charge: Charge
    result: str

    def symbols(self) -> FrozenSet[str]:
        return frozenset({self.obj, self.result})

    def notation(self) -> str:
        return (
            f"[{self.obj}]_{self.label}^{self.charge.value} -> "
            f"[]_{self.label}^{self.new_charge.value} {self.result}"
        )


class DivideRule(RuleBase):
    """[a]_h^alpha -> [b]_h^beta [c]_h^gamma"""

    kind: Literal["divide"] = "divide"
    first_charge: Charge
    first: str
    second_charge: Charge
    second: str

    def symbols(self) -> FrozenSet[str]:
        return frozenset({self.obj, self.first, self.second})

    def notation(self) -> str:
        return (
            f"[{self.obj}]_{self.label}^{self.charge.value} -> "
            f"[{self.first}]_{self.label}^{self.first_charge.value} "
            f"[{self.second}]_{self.label}^{self.second_charge.value}"
        )


Rule = Annotated[
    Union[EvolveRule, SendInRule, SendOutRule, DivideRule],
    Field(discriminator="kind"),
]


class InnerMembrane(BaseModel):
    """Initial inner membrane; `parent` is None for membranes placed in the skin."""

    model_config = ConfigDict(frozen=True)

    label: str
    contents: Multiset = EMPTY
    parent: Optional[str] = None


class SystemSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    alphabet: Tuple[str, ...]
    labels: Tuple[str, ...]
    skin: str
    skin_init: Multiset = EMPTY
    inner_init: Tuple[InnerMembrane, ...] = ()
    rules: Tuple[Rule, ...] = ()
    bound: int
    input_label: Optional[str] = None

    @property
    def m(self) -> int:
        """Number of initial inner membranes."""
        return len(self.inner_init)

    def summary(self) -> str:
        rules = "rule" if len(self.rules) == 1 else "rules"
        return (
            f"{len(self.rules)} {rules}, {self.m} inner "
            f"(|objects|={len(self.alphabet)}, |labels|={len(self.labels)}, T={self.bound})"
        )


def _check_symbol(symbol: str, alphabet: FrozenSet[str], ordinal: Optional[int] = None):
    if symbol not in alphabet:
        raise UnknownSymbol(f"unknown object {symbol!r}", element=symbol, ordinal=ordinal)


def _check_label(label: str, labels: FrozenSet[str], ordinal: Optional[int] = None):
    if label not in labels:
        raise UnknownLabel(f"unknown label {label!r}", element=label, ordinal=ordinal)


def validate_system(spec: SystemSpec) -> SystemSpec:
    """
    Check the structural invariants of a P system description.

    Returns the spec normalised (alphabet and labels sorted, rule ordinals equal to
    positions) or raises the InvalidSystemError subclass naming the offending element.
    """
    if spec.bound < 1:
        raise BadBound(f"bound must be at least 1, got {spec.bound}", element=str(spec.bound))

    seen: set[str] = set()
    for symbol in spec.alphabet:
        if not TOKEN_PATTERN.match(symbol):
            raise InvalidSystemError(f"malformed object name {symbol!r}", element=symbol)
        if symbol in seen:
            raise DuplicateSymbol(f"object {symbol!r} declared twice", element=symbol)
        seen.add(symbol)
    alphabet = frozenset(spec.alphabet)

    seen = set()
    for label in spec.labels:
        if not TOKEN_PATTERN.match(label):
            raise InvalidSystemError(f"malformed label {label!r}", element=label)
        if label in seen:
            raise DuplicateLabel(f"label {label!r} declared twice", element=label)
        seen.add(label)
    labels = frozenset(spec.labels)

    _check_label(spec.skin, labels)
    placed = {spec.skin}
    for inner in spec.inner_init:
        _check_label(inner.label, labels)
        if inner.parent is not None and inner.parent != spec.skin:
            _check_label(inner.parent, labels)
            raise NotShallow(
                f"membrane {inner.label!r} is nested inside {inner.parent!r}; "
                "only one level below the skin is allowed",
                element=inner.label,
            )
        if inner.label in placed:
            raise DuplicateLabel(
                f"label {inner.label!r} is used by more than one membrane",
                element=inner.label,
            )
        placed.add(inner.label)
        for symbol in inner.contents.support():
            _check_symbol(symbol, alphabet)
    inner_init = tuple(
        inner if inner.parent is None else inner.model_copy(update={"parent": None})
        for inner in spec.inner_init
    )
    for label in spec.labels:
        if label not in placed:
            raise UnplacedLabel(f"label {label!r} is not used by any membrane", element=label)
    for symbol in spec.skin_init.support():
        _check_symbol(symbol, alphabet)

    rules: List[Rule] = []
    for ordinal, rule in enumerate(spec.rules):
        _check_label(rule.label, labels, ordinal)
        for symbol in sorted(rule.symbols()):
            _check_symbol(symbol, alphabet, ordinal)
        if rule.label == spec.skin and isinstance(rule, (SendInRule, DivideRule)):
            raise InvalidRuleTarget(
                f"rule {ordinal} ({rule.kind}) cannot target the skin membrane {spec.skin!r}",
                element=rule.label,
                ordinal=ordinal,
            )
        rules.append(rule if rule.ordinal == ordinal else rule.model_copy(update={"ordinal": ordinal}))

    if spec.input_label is not None:
        _check_label(spec.input_label, labels)

    return spec.model_copy(
        update={
            "alphabet": tuple(sorted(alphabet)),
            "labels": tuple(sorted(labels)),
            "inner_init": inner_init,
            "rules": tuple(rules),
        }
    )
