"""
Guessed interaction counts and idle skin counts shared by the outer simulation and
the inner query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

# choice point tags
OUTER_SENDIN = "outer.sendin"
OUTER_SENDOUT = "outer.sendout"
OUTER_EVOLVE = "outer.evolve"
OUTER_ENV = "outer.env"
INNER_DIVIDE = "inner.divide"
INNER_SENDIN = "inner.sendin"
INNER_SENDOUT = "inner.sendout"
INNER_EVOLVE = "inner.evolve"


def compute_guess_cap(m: int, t: int) -> int:
    """Most inner membranes that can exist at step t when m start: m * 2**t."""
    if m < 0 or t < 0:
        raise ValueError(f"guess cap needs m >= 0 and t >= 0, got m={m}, t={t}")
    return m * (1 << t)


@dataclass(frozen=True)
class GuessCap:
    m: int
    t: int

    @property
    def K(self) -> int:
        return compute_guess_cap(self.m, self.t)


class InteractionTable:
    """
    Counts keyed by (rule ordinal, step) for send-in and send-out rules of inner
    membranes. The outer run writes values in [0, K]; the query decrements them and
    may drive them negative.
    """

    def __init__(self, entries: Optional[Dict[Tuple[int, int], int]] = None):
        self._entries: Dict[Tuple[int, int], int] = dict(entries or {})

    def get(self, rule: int, t: int) -> int:
        return self._entries.get((rule, t), 0)

    def set(self, rule: int, t: int, value: int) -> None:
        self._entries[(rule, t)] = value

    def add(self, rule: int, t: int, delta: int) -> None:
        self._entries[(rule, t)] = self.get(rule, t) + delta

    def copy(self) -> "InteractionTable":
        return InteractionTable(self._entries)

    def is_zero(self) -> bool:
        return all(value == 0 for value in self._entries.values())

    def items(self) -> Iterator[Tuple[Tuple[int, int], int]]:
        yield from sorted(self._entries.items())

    def key(self) -> Tuple[Tuple[Tuple[int, int], int], ...]:
        """Hashable digest of the non-zero entries."""
        return tuple((k, v) for k, v in self.items() if v != 0)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, InteractionTable) and self.key() == other.key()

    def __repr__(self) -> str:
        return f"InteractionTable({dict(self.items())})"

    def dump(self) -> List[Dict[str, int]]:
        return [{"rule": rule, "t": t, "count": count} for (rule, t), count in self.items()]


class UnusedTable:
    """Skin objects left idle per step, keyed by (object, step); only positive counts are kept."""

    def __init__(self, entries: Optional[Dict[Tuple[str, int], int]] = None):
        self._entries: Dict[Tuple[str, int], int] = {
            k: v for k, v in (entries or {}).items() if v > 0
        }

    def get(self, obj: str, t: int) -> int:
        return self._entries.get((obj, t), 0)

    def set(self, obj: str, t: int, value: int) -> None:
        if value < 0:
            raise ValueError(f"idle count for {obj!r} at step {t} cannot be {value}")
        if value:
            self._entries[(obj, t)] = value
        else:
            self._entries.pop((obj, t), None)

    def items(self) -> Iterator[Tuple[Tuple[str, int], int]]:
        yield from sorted(self._entries.items(), key=lambda item: (item[0][1], item[0][0]))

    def key(self) -> Tuple[Tuple[Tuple[str, int], int], ...]:
        return tuple(self.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UnusedTable) and self.key() == other.key()

    def __repr__(self) -> str:
        return f"UnusedTable({dict(self.items())})"

    def dump(self) -> List[Dict]:
        return [{"object": obj, "t": t, "count": count} for (obj, t), count in self.items()]


def dump_tables(interactions: InteractionTable, unused: UnusedTable) -> Dict[str, List[Dict]]:
    return {"T": interactions.dump(), "U": unused.dump()}
