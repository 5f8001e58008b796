from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Tuple

from psys_oracle.domain.model import Charge, SystemSpec
from psys_oracle.domain.multiset import EMPTY, Multiset
from psys_oracle.exceptions import InvalidInputError, UnknownSymbol


@dataclass(frozen=True, order=True)
class MembraneInstance:
    """[w]_h^alpha: one membrane's label, charge and contents."""

    label: str
    charge: Charge
    contents: Multiset = EMPTY

    def render(self) -> str:
        body = "" if self.contents.is_empty() else self.contents.render()
        return f"[{body}]_{self.label}^{self.charge.value}"


InnerBag = Tuple[Tuple[MembraneInstance, int], ...]


def make_inner_bag(instances: Iterable[MembraneInstance] | Counter) -> InnerBag:
    """Canonical bag of inner membranes: (instance, multiplicity) sorted by instance."""
    counts = instances if isinstance(instances, Counter) else Counter(instances)
    return tuple(sorted((inst, n) for inst, n in counts.items() if n > 0))


@dataclass(frozen=True)
class Configuration:
    env: Multiset
    skin: MembraneInstance
    inner: InnerBag = field(default=())

    def inner_instances(self) -> Iterator[MembraneInstance]:
        for instance, count in self.inner:
            for _ in range(count):
                yield instance

    def render(self) -> str:
        parts = [inst.render() if n == 1 else f"{inst.render()}*{n}" for inst, n in self.inner]
        if not self.skin.contents.is_empty():
            parts.append(self.skin.contents.render())
        inside = " ".join(parts)
        return f"env: {self.env.render()} | [{inside}]_{self.skin.label}^{self.skin.charge.value}"


def initial_configuration(spec: SystemSpec, input: Optional[Multiset] = None) -> Configuration:
    """
    Build the initial configuration: empty environment, every membrane neutral.

    `input` is added to the designated input membrane (the uniform-family
    input multiset).
    """
    skin_contents = spec.skin_init
    inner_contents = [inner.contents for inner in spec.inner_init]
    if input is not None and not input.is_empty():
        if spec.input_label is None:
            raise InvalidInputError("the system declares no @input membrane")
        for symbol in input.support():
            if symbol not in spec.alphabet:
                raise UnknownSymbol(f"unknown input object {symbol!r}", element=symbol)
        if spec.input_label == spec.skin:
            skin_contents = skin_contents + input
        else:
            for index, inner in enumerate(spec.inner_init):
                if inner.label == spec.input_label:
                    inner_contents[index] = inner_contents[index] + input
    return Configuration(
        env=EMPTY,
        skin=MembraneInstance(spec.skin, Charge.NEUTRAL, skin_contents),
        inner=make_inner_bag(
            MembraneInstance(inner.label, Charge.NEUTRAL, contents)
            for inner, contents in zip(spec.inner_init, inner_contents)
        ),
    )


def inject_input(spec: SystemSpec, input: Optional[Multiset]) -> SystemSpec:
    """Return the spec with `input` folded into the initial contents of its input membrane."""
    if input is None or input.is_empty():
        return spec
    start = initial_configuration(spec, input)
    inner_contents = {inst.label: inst.contents for inst in start.inner_instances()}
    return spec.model_copy(
        update={
            "skin_init": start.skin.contents,
            "inner_init": tuple(
                inner.model_copy(update={"contents": inner_contents[inner.label]})
                for inner in spec.inner_init
            ),
        }
    )
