"""
Counted bag of object symbols.

A Multiset is an immutable value: every operation returns a new instance. The
entries are kept as a tuple sorted by symbol name, which gives canonical
equality, hashing and ordering (configurations built from multisets are
deduplicated by these keys).
"""

from __future__ import annotations

from collections import Counter
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from pydantic_core import core_schema

from psys_oracle.exceptions import NegativeCount


class Multiset:
    __slots__ = ("_items", "_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[str] | None = None):
        if counts is None:
            raw: Mapping[str, int] = {}
        elif isinstance(counts, Mapping):
            raw = counts
        else:
            raw = Counter(counts)
        for symbol, count in raw.items():
            if count < 0:
                raise NegativeCount(f"negative count {count} for object {symbol!r}")
        self._items: Tuple[Tuple[str, int], ...] = tuple(
            sorted((s, int(c)) for s, c in raw.items() if c > 0)
        )
        self._counts: Dict[str, int] = dict(self._items)
        self._hash = hash(self._items)

    @classmethod
    def of(cls, *symbols: str) -> "Multiset":
        return cls(Counter(symbols))

    def __getitem__(self, symbol: str) -> int:
        return self._counts.get(symbol, 0)

    def count(self, symbol: str) -> int:
        """|w|_a, zero for absent symbols."""
        return self._counts.get(symbol, 0)

    def items(self) -> Tuple[Tuple[str, int], ...]:
        return self._items

    def support(self) -> Tuple[str, ...]:
        return tuple(s for s, _ in self._items)

    def total(self) -> int:
        return sum(c for _, c in self._items)

    def is_empty(self) -> bool:
        return not self._items

    def __iter__(self) -> Iterator[str]:
        for symbol, count in self._items:
            for _ in range(count):
                yield symbol

    def __len__(self) -> int:
        return self.total()

    def __bool__(self) -> bool:
        return bool(self._items)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._counts

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._items == other._items
        return NotImplemented

    def __lt__(self, other: "Multiset") -> bool:
        return self._items < other._items

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "Multiset") -> bool:
        """Inclusion: every count of self is at most the count in other."""
        return all(other.count(s) >= c for s, c in self._items)

    def __add__(self, other: "Multiset | Mapping[str, int]") -> "Multiset":
        merged = Counter(self._counts)
        merged.update(dict(other.items()))
        return Multiset(merged)

    def __sub__(self, other: "Multiset | Mapping[str, int]") -> "Multiset":
        return self.apply(remove=other)

    def apply(
        self,
        add: "Multiset | Mapping[str, int] | None" = None,
        remove: "Multiset | Mapping[str, int] | None" = None,
    ) -> "Multiset":
        """Count-wise base + add - remove; NegativeCount on underflow."""
        result = Counter(self._counts)
        if add is not None:
            for symbol, count in dict(add.items()).items():
                result[symbol] += count
        if remove is not None:
            for symbol, count in dict(remove.items()).items():
                result[symbol] -= count
                if result[symbol] < 0:
                    raise NegativeCount(
                        f"removing {count} x {symbol!r} leaves {result[symbol]}"
                    )
        return Multiset(result)

    def render(self) -> str:
        """Canonical text: symbols sorted by name, `a b*2`, `.` when empty."""
        if not self._items:
            return "."
        return " ".join(s if c == 1 else f"{s}*{c}" for s, c in self._items)

    def __repr__(self) -> str:
        return f"Multiset({self.render()})"

    def __str__(self) -> str:
        return self.render()

    @classmethod
    def __get_pydantic_core_schema__(cls, source, handler):
        def coerce(value):
            if isinstance(value, Multiset):
                return value
            if isinstance(value, (Mapping, list, tuple)):
                return Multiset(value)
            raise ValueError(f"cannot build a multiset from {type(value).__name__}")

        return core_schema.no_info_plain_validator_function(
            coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda m: dict(m.items())
            ),
        )


def mset_apply(base: Multiset, add: Multiset, remove: Multiset) -> Multiset:
    """Count-wise base + add - remove, raising NegativeCount on underflow."""
    return base.apply(add=add, remove=remove)


EMPTY = Multiset()
