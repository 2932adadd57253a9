"""Greedy synonym-swap attack against a black-box victim.

Positions are ranked once by leave-one-out importance. They are then visited in
that order, and each one takes the synonym that most lowers the victim's confidence
in its original prediction, as long as that is a strict improvement.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

import attr
import numpy as np
from tqdm import tqdm

from convattack.abstractions.example import Dataset, DialogueTurn, EntailmentExample
from convattack.abstractions.victim import VictimInterface, predicted_label
from convattack.attacks.constraints import default_stopwords, modifiable_positions
from convattack.attacks.results import AttackConfig, AttackResult, Swap, Target
from convattack.attacks.tokenizer import Token, detokenize, tokenize
from convattack.embedding.table import EmbeddingTable, nearest_synonyms
from convattack.utils.errors import OutOfVocabulary
from convattack.utils.seeding import make_rng

_logger = logging.getLogger(__name__)

HYPOTHESIS = 0


@attr.s(frozen=True, slots=True, order=True)
class Position:
    """A token slot: field 0 is the hypothesis, field k the k-th dialogue turn."""

    field: int = attr.ib()
    index: int = attr.ib()

    @property
    def field_name(self) -> str:
        return "hypothesis" if self.field == HYPOTHESIS else f"dialogue[{self.field - 1}]"


class _Query:
    """Renders edited texts and asks the victim, counting every call."""

    def __init__(self, victim: VictimInterface, example: EntailmentExample, targets: int):
        self.victim = victim
        self.example = example
        self.texts = [example.hypothesis] + [turn.text for turn in example.dialogue]
        self.tokens: list[list[Token]] = [tokenize(t) for t in self.texts[:targets]]
        self.count = 0

    def render(self, replacements: dict[Position, str], deleted: Position | None = None):
        texts = list(self.texts)
        for field, tokens in enumerate(self.tokens):
            edits = {p.index: r for p, r in replacements.items() if p.field == field}
            dropped = []
            if deleted is not None and deleted.field == field:
                dropped = [deleted.index]
            if edits or dropped:
                texts[field] = detokenize(texts[field], tokens, edits, dropped)
        return texts

    def premise(self, texts: list[str]) -> str:
        turns = self.example.dialogue
        return "\n".join(f"{turn.speaker}: {text}" for turn, text in zip(turns, texts[1:]))

    def __call__(self, replacements: dict[Position, str], deleted: Position | None = None):
        texts = self.render(replacements, deleted)
        self.count += 1
        p = self.victim.predict_proba(self.premise(texts), texts[HYPOTHESIS])
        return float(p[0]), float(p[1])


def _targets(example: EntailmentExample, config: AttackConfig) -> int:
    if config.target is Target.hypothesis_and_dialogue:
        return 1 + len(example.dialogue)
    return 1


def _positions(query: _Query, config: AttackConfig, stopwords) -> list[Position]:
    return [
        Position(field, i)
        for field, tokens in enumerate(query.tokens)
        for i in modifiable_positions(tokens, config, stopwords)
    ]


def _importance(query: _Query, positions: list[Position], orig_pred: bool, base: float):
    return np.array([base - query({}, deleted=p)[int(orig_pred)] for p in positions])


def word_importance(
    victim: VictimInterface,
    example: EntailmentExample,
    positions: Iterable[Position | int],
) -> np.ndarray:
    """p(orig_pred) minus the same probability with each position's token deleted.

    Bare integers index hypothesis tokens. Issues len(positions) + 1 queries.
    """
    positions = [
        p if isinstance(p, Position) else Position(HYPOTHESIS, p) for p in positions
    ]
    fields = 1 + max((p.field for p in positions), default=0)
    query = _Query(victim, example, fields)
    probs = query({})
    orig_pred = predicted_label(probs)
    return _importance(query, positions, orig_pred, probs[int(orig_pred)])


def attack_example(
    victim: VictimInterface,
    table: EmbeddingTable,
    example: EntailmentExample,
    config: AttackConfig,
    stopwords: frozenset[str] | None = None,
) -> AttackResult:
    stopwords = default_stopwords() if stopwords is None else stopwords
    query = _Query(victim, example, _targets(example, config))
    positions = _positions(query, config, stopwords)

    probs = query({})
    orig_pred = predicted_label(probs)
    k = int(orig_pred)
    best = probs[k]
    current_pred = orig_pred
    budget = config.budget(len(positions))

    swaps: list[Swap] = []
    replacements: dict[Position, str] = {}
    if budget > 0:
        scores = _importance(query, positions, orig_pred, best)
        rng = make_rng(config.seed, example.id)
        tie_break = rng.permutation(len(positions))
        order = np.lexsort((tie_break, -scores))
        for j in order:
            if len(swaps) >= budget or current_pred != orig_pred:
                break
            position = positions[j]
            original = query.tokens[position.field][position.index].text
            try:
                candidates = nearest_synonyms(
                    table, original, config.max_candidates, config.min_cos_sim
                )
            except OutOfVocabulary:
                continue
            chosen, chosen_probs = None, None
            for candidate in candidates:
                p = query({**replacements, position: candidate.token})
                if p[k] < (best if chosen_probs is None else chosen_probs[k]):
                    chosen, chosen_probs = candidate, p
            if chosen is None:
                continue
            replacements[position] = chosen.token
            swaps.append(
                Swap(
                    position.index, original, chosen.token, chosen.cosine,
                    position.field_name,
                )
            )
            best = chosen_probs[k]
            current_pred = predicted_label(chosen_probs)
            _logger.debug(
                "%s: %s %r -> %r, p=%.4f", example.id, position.field_name, original,
                chosen.token, best,
            )

    texts = query.render(replacements)
    dialogue = tuple(texts[1 : len(query.tokens)]) if len(query.tokens) > 1 else ()
    return AttackResult(
        example_id=example.id,
        original_hypothesis=example.hypothesis,
        perturbed_hypothesis=texts[HYPOTHESIS],
        swaps=swaps,
        orig_pred=orig_pred,
        new_pred=current_pred,
        queries=query.count,
        label=example.label,
        perturbed_dialogue=dialogue,
    )


def apply_result(example: EntailmentExample, result: AttackResult) -> EntailmentExample:
    """The example with the attacked texts substituted; id and label untouched."""
    dialogue = example.dialogue
    if result.perturbed_dialogue:
        dialogue = tuple(
            DialogueTurn(turn.speaker, text)
            for turn, text in zip(example.dialogue, result.perturbed_dialogue)
        )
    return attr.evolve(example, dialogue=dialogue, hypothesis=result.perturbed_hypothesis)


def attack_dataset(
    victim: VictimInterface,
    table: EmbeddingTable,
    ds: Dataset,
    config: AttackConfig,
    stopwords: frozenset[str] | None = None,
    workers: int = 1,
    progress: bool = False,
) -> tuple[list[AttackResult], Dataset]:
    """Attacks every example; results come back in input order whatever `workers` is."""
    stopwords = default_stopwords() if stopwords is None else stopwords

    def run(example):
        return attack_example(victim, table, example, config, stopwords)

    examples = list(ds)
    bar = tqdm(total=len(examples), desc=f"attack {ds.name}", disable=not progress)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = []
            for result in pool.map(run, examples):
                results.append(result)
                bar.update()
    else:
        results = []
        for example in examples:
            results.append(run(example))
            bar.update()
    bar.close()

    perturbed = ds.evolve(
        name=f"{ds.name}-attacked",
        examples=[apply_result(e, r) for e, r in zip(examples, results)],
    )
    flipped = sum(r.success for r in results)
    _logger.info(
        "attacked %s: %d/%d flipped, %d swaps, %d queries",
        ds.name, flipped, len(results), sum(len(r.swaps) for r in results),
        sum(r.queries for r in results),
    )
    return results, perturbed
