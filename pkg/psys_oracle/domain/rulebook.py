from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Tuple

from psys_oracle.domain.model import (
    Charge,
    DivideRule,
    EvolveRule,
    SendInRule,
    SendOutRule,
    SystemSpec,
)

Key = Tuple[str, Charge]


class RuleBook:
    """
    Rules of a validated system indexed by (label, charge) and by trigger object.

    Every list keeps rule ordinal order, so iteration is deterministic everywhere.
    """

    def __init__(self, spec: SystemSpec):
        self.spec = spec
        self.skin = spec.skin
        self.alphabet = spec.alphabet
        self.inner_labels = tuple(inner.label for inner in spec.inner_init)
        self.m = spec.m

        self._evolve: Dict[Key, List[EvolveRule]] = defaultdict(list)
        self._send_in: Dict[Key, List[SendInRule]] = defaultdict(list)
        self._send_out: Dict[Key, List[SendOutRule]] = defaultdict(list)
        self._divide: Dict[Key, List[DivideRule]] = defaultdict(list)
        self._evolve_objects: Dict[Key, set] = defaultdict(set)
        self._blocking_objects: Dict[Key, set] = defaultdict(set)

        self.inner_send_in: List[SendInRule] = []
        self.inner_send_out: List[SendOutRule] = []
        self.divisible_labels: set[str] = set()

        for rule in spec.rules:
            key = (rule.label, rule.charge)
            if isinstance(rule, EvolveRule):
                self._evolve[key].append(rule)
                self._evolve_objects[key].add(rule.obj)
            elif isinstance(rule, SendInRule):
                self._send_in[key].append(rule)
                if rule.label != self.skin:
                    self.inner_send_in.append(rule)
            elif isinstance(rule, SendOutRule):
                self._send_out[key].append(rule)
                self._blocking_objects[key].add(rule.obj)
                if rule.label != self.skin:
                    self.inner_send_out.append(rule)
            elif isinstance(rule, DivideRule):
                self._divide[key].append(rule)
                self._blocking_objects[key].add(rule.obj)
                self.divisible_labels.add(rule.label)

    def evolve(self, label: str, charge: Charge) -> List[EvolveRule]:
        return self._evolve.get((label, charge), [])

    def send_in(self, label: str, charge: Charge) -> List[SendInRule]:
        return self._send_in.get((label, charge), [])

    def send_out(self, label: str, charge: Charge) -> List[SendOutRule]:
        return self._send_out.get((label, charge), [])

    def divide(self, label: str, charge: Charge) -> List[DivideRule]:
        return self._divide.get((label, charge), [])

    def evolves(self, label: str, charge: Charge, obj: str) -> bool:
        """An evolution rule for `obj` exists in a membrane with this label and charge."""
        return obj in self._evolve_objects.get((label, charge), ())

    def blocks_on(self, label: str, charge: Charge, obj: str) -> bool:
        """A send-out or division rule is triggered by `obj` inside the membrane."""
        return obj in self._blocking_objects.get((label, charge), ())

    def label_cap(self, label: str, t: int) -> int:
        """Upper bound on membranes with `label` during step t (one initial membrane per label)."""
        return 2**t if label in self.divisible_labels else 1
