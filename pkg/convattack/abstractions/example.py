from __future__ import annotations

from enum import Enum
from typing import Iterator

import attr

from convattack.utils.errors import DataError


class Split(str, Enum):
    train = "train"
    dev = "dev"
    test = "test"


def _non_blank(instance, attribute, value):
    if not isinstance(value, str) or not value.strip():
        raise DataError(f"{type(instance).__name__}.{attribute.name} must be non-empty")


@attr.s(frozen=True, slots=True)
class DialogueTurn:
    speaker: str = attr.ib(validator=attr.validators.instance_of(str))
    text: str = attr.ib(validator=_non_blank)

    @property
    def line(self) -> str:
        return f"{self.speaker}: {self.text}"


def _turns(instance, attribute, value):
    if len(value) == 0:
        raise DataError(f"example {instance.id!r} has an empty dialogue")
    for turn in value:
        if not isinstance(turn, DialogueTurn):
            raise DataError(f"example {instance.id!r} has a non-turn dialogue entry")


@attr.s(frozen=True, slots=True)
class EntailmentExample:
    id: str = attr.ib(validator=_non_blank)
    dialogue: tuple[DialogueTurn, ...] = attr.ib(converter=tuple, validator=_turns)
    hypothesis: str = attr.ib(validator=_non_blank)
    label: bool = attr.ib(validator=attr.validators.instance_of(bool))

    @property
    def premise(self) -> str:
        """The dialogue flattened to "speaker: text" lines."""
        return "\n".join(turn.line for turn in self.dialogue)


def _unique_ids(instance, attribute, value):
    seen = set()
    for example in value:
        if example.id in seen:
            raise DataError(f"duplicate example id {example.id!r} in {instance.name!r}")
        seen.add(example.id)


@attr.s(frozen=True, slots=True)
class Dataset:
    name: str = attr.ib()
    examples: tuple[EntailmentExample, ...] = attr.ib(converter=tuple, validator=_unique_ids)
    split: Split = attr.ib(default=Split.train, converter=Split)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[EntailmentExample]:
        return iter(self.examples)

    @property
    def ids(self) -> list[str]:
        return [example.id for example in self.examples]

    @property
    def labels(self) -> list[bool]:
        return [example.label for example in self.examples]

    def evolve(self, **changes) -> Dataset:
        return attr.evolve(self, **changes)
