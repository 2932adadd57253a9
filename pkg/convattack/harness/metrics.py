from __future__ import annotations

from typing import Sequence

import attr
import numpy as np
from sklearn.metrics import confusion_matrix

from convattack.abstractions.example import Dataset
from convattack.abstractions.victim import VictimInterface, predict_labels
from convattack.attacks.results import AttackResult
from convattack.utils.errors import DataError


@attr.s(frozen=True, slots=True)
class ConfusionMatrix:
    """Counts with "entailed" (True) as the positive class."""

    tp: int = attr.ib()
    fp: int = attr.ib()
    tn: int = attr.ib()
    fn: int = attr.ib()

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @classmethod
    def from_predictions(cls, labels: Sequence[bool], predictions: Sequence[bool]):
        y_true = np.asarray(labels, dtype=bool)
        y_pred = np.asarray(predictions, dtype=bool)
        (tn, fp), (fn, tp) = confusion_matrix(y_true, y_pred, labels=[False, True])
        return cls(int(tp), int(fp), int(tn), int(fn))

    def to_dict(self) -> dict:
        return attr.asdict(self)

    def render(self) -> str:
        return (
            f"tp={self.tp} fp={self.fp}\n"
            f"fn={self.fn} tn={self.tn}"
        )


def predictions(victim: VictimInterface, ds: Dataset) -> list[bool]:
    labels = predict_labels(victim, ((e.premise, e.hypothesis) for e in ds))
    return [bool(p) for p in labels]


def evaluate(victim: VictimInterface, ds: Dataset) -> tuple[float, ConfusionMatrix]:
    if len(ds) == 0:
        raise DataError(f"cannot evaluate on the empty dataset {ds.name!r}")
    matrix = ConfusionMatrix.from_predictions(ds.labels, predictions(victim, ds))
    return matrix.accuracy, matrix


def attack_success_rate(
    results: Sequence[AttackResult], restrict_to_correct: bool = False
) -> float:
    """Fraction of flipped predictions, optionally among originally-correct examples only."""
    if not results:
        raise DataError("no attack results to score")
    pool = [r for r in results if r.correct] if restrict_to_correct else list(results)
    if not pool:
        raise DataError("the victim got every attacked example wrong")
    return sum(r.success for r in pool) / len(pool)
