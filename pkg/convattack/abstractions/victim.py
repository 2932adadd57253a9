from __future__ import annotations

from typing import Iterable, Protocol, runtime_checkable

import numpy as np

from convattack.abstractions.types import Probabilities


@runtime_checkable
class VictimInterface(Protocol):
    """Anything an attack can target: a black box returning (p_false, p_true).

    Implementations must be deterministic between training steps and return
    non-negative probabilities summing to 1.
    """

    def predict_proba(self, dialogue: str, hypothesis: str) -> Probabilities:
        ...


def predict_batch(
    victim: VictimInterface, pairs: Iterable[tuple[str, str]]
) -> np.ndarray:
    """(n, 2) probabilities, one query per pair."""
    pairs = list(pairs)
    out = np.empty((len(pairs), 2), dtype=np.float64)
    for i, (dialogue, hypothesis) in enumerate(pairs):
        out[i] = victim.predict_proba(dialogue, hypothesis)
    return out


def predicted_label(probs) -> bool:
    # ties resolve to False, the first class
    return bool(probs[1] > probs[0])


def predict_labels(victim: VictimInterface, pairs: Iterable[tuple[str, str]]) -> np.ndarray:
    """Boolean predictions for each pair, with the same tie rule as predicted_label."""
    probs = predict_batch(victim, pairs)
    return probs[:, 1] > probs[:, 0]
