from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Iterable

import attr

from convattack.utils.errors import ConfigError, DataError, config_errors, is_whole, whole


class Target(str, Enum):
    hypothesis_only = "hypothesis_only"
    hypothesis_and_dialogue = "hypothesis_and_dialogue"


def _in_unit_interval(instance, attribute, value):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"{attribute.name} must be in [0, 1], got {value}")


def _positive_int(instance, attribute, value):
    if not is_whole(value) or value < 1:
        raise ConfigError(f"{attribute.name} must be a positive integer, got {value}")


def _to_target(value) -> Target:
    try:
        return Target(value)
    except ValueError:
        choices = ", ".join(t.value for t in Target)
        raise ConfigError(f"target must be one of {choices}, got {value!r}") from None


def _to_lexicon(value) -> frozenset[str] | None:
    if value is None:
        return None
    if isinstance(value, str):
        raise ConfigError("pos_lexicon must be a list of tokens, not a string")
    return frozenset(str(token).lower() for token in value)


@attr.s(frozen=True, slots=True)
class AttackConfig:
    pct_words_to_swap: float = attr.ib(
        default=0.5, converter=float, validator=_in_unit_interval
    )
    min_cos_sim: float = attr.ib(default=0.5, converter=float, validator=_in_unit_interval)
    max_candidates: int = attr.ib(default=50, converter=whole, validator=_positive_int)
    target: Target = attr.ib(default=Target.hypothesis_only, converter=_to_target)
    pos_lexicon: frozenset[str] | None = attr.ib(default=None, converter=_to_lexicon)
    seed: int = attr.ib(default=0, converter=int)

    def budget(self, modifiable: int) -> int:
        """ceil(pct * modifiable); the product is rounded first so 0.7 * 10 stays 7."""
        return math.ceil(round(self.pct_words_to_swap * modifiable, 9))

    def to_dict(self) -> dict:
        return {
            "pct_words_to_swap": self.pct_words_to_swap,
            "min_cos_sim": self.min_cos_sim,
            "max_candidates": int(self.max_candidates),
            "target": self.target.value,
            "pos_lexicon": None if self.pos_lexicon is None else sorted(self.pos_lexicon),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> AttackConfig:
        unknown = set(data) - {f.name for f in attr.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown attack config keys: {sorted(unknown)}")
        with config_errors("attack config"):
            return cls(**data)


@attr.s(frozen=True, slots=True)
class Swap:
    position: int = attr.ib()
    original: str = attr.ib()
    replacement: str = attr.ib()
    cosine: float = attr.ib()
    field: str = attr.ib(default="hypothesis")

    @replacement.validator
    def _differs(self, attribute, value):
        if value == self.original:
            raise DataError(f"swap at {self.position} replaces {value!r} with itself")


@attr.s(frozen=True, slots=True)
class AttackResult:
    example_id: str = attr.ib()
    original_hypothesis: str = attr.ib()
    perturbed_hypothesis: str = attr.ib()
    swaps: tuple[Swap, ...] = attr.ib(converter=tuple)
    orig_pred: bool = attr.ib()
    new_pred: bool = attr.ib()
    queries: int = attr.ib()
    label: bool = attr.ib()
    # attacked turn texts, empty when the dialogue was not a target
    perturbed_dialogue: tuple[str, ...] = attr.ib(default=(), converter=tuple)

    @swaps.validator
    def _distinct(self, attribute, value):
        keys = [(s.field, s.position) for s in value]
        if len(set(keys)) != len(keys):
            raise DataError(f"{self.example_id}: a position was modified twice")

    @property
    def success(self) -> bool:
        return self.new_pred != self.orig_pred

    @property
    def correct(self) -> bool:
        """Whether the victim was right before the attack."""
        return self.orig_pred == self.label

    def to_dict(self) -> dict:
        data = {
            "example_id": self.example_id,
            "original_hypothesis": self.original_hypothesis,
            "perturbed_hypothesis": self.perturbed_hypothesis,
            "swaps": [attr.asdict(swap) for swap in self.swaps],
            "orig_pred": self.orig_pred,
            "new_pred": self.new_pred,
            "queries": self.queries,
            "success": self.success,
            "label": self.label,
        }
        if self.perturbed_dialogue:
            data["perturbed_dialogue"] = list(self.perturbed_dialogue)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> AttackResult:
        data = dict(data)
        success = data.pop("success", None)
        try:
            data["swaps"] = [Swap(**swap) for swap in data["swaps"]]
            result = cls(**data)
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed attack result: {e}") from e
        if success is not None and success != result.success:
            raise DataError(f"{result.example_id}: success disagrees with predictions")
        return result


def dumps_results(results: Iterable[AttackResult]) -> str:
    return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in results)


def save_results(results: Iterable[AttackResult], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_results(results), encoding="utf-8")
    return path


def load_results(path: str | Path) -> list[AttackResult]:
    results = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                results.append(AttackResult.from_dict(json.loads(line)))
            except json.JSONDecodeError as e:
                raise DataError(f"{path}:{lineno}: {e}") from e
            except DataError as e:
                raise DataError(f"{path}:{lineno}: {e}") from e
    return results
