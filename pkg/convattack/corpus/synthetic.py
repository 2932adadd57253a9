"""Desk-scale stand-in for the conversation entailment corpus.

Every example is a short two- or three-turn dialogue around one fact ("john bought
the old car"). Positives restate the fact, so their hypothesis words overlap the
dialogue by a clear majority. Negatives keep the overlap but substitute an entity or
verb absent from the dialogue, or insert a negation.
"""
from __future__ import annotations

import logging

import numpy as np

from convattack.abstractions.example import Dataset, DialogueTurn, EntailmentExample, Split
from convattack.corpus import lexicon
from convattack.utils.errors import ConfigError, DataError

_logger = logging.getLogger(__name__)

MIN_WORDS_PER_CATEGORY = 3


def _pools(vocab) -> dict[str, tuple[str, ...]]:
    pools = {
        "name": tuple(w for w in lexicon.NAMES if w in vocab),
        "noun": tuple(w for w in lexicon.NOUNS if w in vocab),
        "verb": tuple(w for w in lexicon.VERBS if w in vocab),
        "adj": tuple(w for w in lexicon.ADJECTIVES if w in vocab),
    }
    short = [k for k, words in pools.items() if len(words) < MIN_WORDS_PER_CATEGORY]
    if short:
        raise DataError(
            f"vocabulary too small to fill templates: fewer than "
            f"{MIN_WORDS_PER_CATEGORY} {', '.join(short)} words in the table"
        )
    return pools


def _pick(rng: np.random.Generator, words, exclude=()) -> str:
    choices = [w for w in words if w not in exclude]
    return choices[int(rng.integers(len(choices)))]


def _scene(rng, pools) -> tuple[dict, list[DialogueTurn]]:
    slots = {
        "name": _pick(rng, pools["name"]),
        "verb": _pick(rng, pools["verb"]),
        "adj": _pick(rng, pools["adj"]),
        "noun": _pick(rng, pools["noun"]),
    }
    template = lexicon.FACT_TEMPLATES[int(rng.integers(len(lexicon.FACT_TEMPLATES)))]
    turns = [
        DialogueTurn("A", template.format(**slots)),
        DialogueTurn("B", lexicon.RESPONSES[int(rng.integers(len(lexicon.RESPONSES)))]),
    ]
    slots["companion"] = None
    if rng.random() < 0.5:
        slots["companion"] = _pick(rng, pools["name"], exclude=(slots["name"],))
        turns.append(
            DialogueTurn("A", lexicon.COMPANION_TEMPLATE.format(name=slots["companion"]))
        )
    return slots, turns


def _positive(rng, pools) -> tuple[list[DialogueTurn], str, bool]:
    slots, turns = _scene(rng, pools)
    if slots["companion"] is not None and rng.random() < 0.25:
        hypothesis = lexicon.COMPANION_HYPOTHESIS.format(name=slots["companion"])
    else:
        template = lexicon.HYPOTHESIS_TEMPLATES[
            int(rng.integers(len(lexicon.HYPOTHESIS_TEMPLATES)))
        ]
        hypothesis = template.format(**slots)
    return turns, hypothesis, True


def _negative(rng, pools) -> tuple[list[DialogueTurn], str, bool]:
    slots, turns = _scene(rng, pools)
    kind = int(rng.integers(3))
    if kind == 2:
        templates = lexicon.NEGATED_TEMPLATES
        template = templates[int(rng.integers(len(templates)))]
        return turns, template.format(**slots), False
    swapped = dict(slots)
    if kind == 0:
        # entity substitution: a name or object that never appears in the dialogue
        if rng.random() < 0.5:
            swapped["name"] = _pick(
                rng, pools["name"], exclude=(slots["name"], slots["companion"])
            )
        else:
            swapped["noun"] = _pick(rng, pools["noun"], exclude=(slots["noun"],))
    else:
        swapped["verb"] = _pick(rng, pools["verb"], exclude=(slots["verb"],))
    templates = lexicon.HYPOTHESIS_TEMPLATES
    template = templates[int(rng.integers(len(templates)))]
    return turns, template.format(**swapped), False


def generate_synthetic(
    n_per_class: int, seed: int, vocab, name: str = "synthetic", split=Split.train
) -> Dataset:
    """2 * n_per_class examples with exactly balanced labels, deterministic in seed."""
    if n_per_class < 1:
        raise ConfigError(f"n_per_class must be at least 1, got {n_per_class}")
    if len(vocab) == 0:
        raise DataError("vocabulary is empty")
    pools = _pools(vocab)
    rng = np.random.default_rng(seed)
    drafts = []
    for _ in range(n_per_class):
        drafts.append(_positive(rng, pools))
        drafts.append(_negative(rng, pools))
    order = rng.permutation(len(drafts))
    examples = [
        EntailmentExample(f"syn_{i:05d}", *drafts[j]) for i, j in enumerate(order)
    ]
    _logger.info("generated %d synthetic examples (seed=%d)", len(examples), seed)
    return Dataset(name=name, examples=examples, split=split)
