import math

import numpy as np
import pytest

from convattack.abstractions.example import Dataset, DialogueTurn, EntailmentExample
from convattack.attacks.constraints import modifiable_positions
from convattack.attacks.tokenizer import tokenize
from convattack.corpus.split import split_dataset
from convattack.corpus.synthetic import generate_synthetic
from convattack.defenses.config import TrainConfig
from convattack.defenses.regimes import train_standard
from convattack.embedding.table import EmbeddingTable
from convattack.embedding.toy import build_toy_table


def make_example(hypothesis, label=True, id="ex_0", turns=("A: john bought the car .",)):
    dialogue = [DialogueTurn(*t.split(": ", 1)) for t in turns]
    return EntailmentExample(id, dialogue, hypothesis, label)


def check_attack_invariants(result, example, config, stopwords):
    tokens = tokenize(example.hypothesis)
    modifiable = modifiable_positions(tokens, config, stopwords)
    positions = [(s.field, s.position) for s in result.swaps]
    assert len(set(positions)) == len(positions)
    for swap in result.swaps:
        assert swap.cosine >= config.min_cos_sim
        assert swap.original != swap.replacement
        if swap.field == "hypothesis":
            assert swap.position in modifiable
            assert tokens[swap.position].text == swap.original
    assert len(result.swaps) <= math.ceil(round(config.pct_words_to_swap * len(modifiable), 9))


class ConstantVictim:
    def __init__(self, probs=(0.5, 0.5)):
        self.probs = probs
        self.calls = 0

    def predict_proba(self, dialogue, hypothesis):
        self.calls += 1
        return self.probs


class AdditiveVictim:
    """p_true = sigmoid(bias + sum of per-word weights in the hypothesis)."""

    def __init__(self, weights, bias=0.0):
        self.weights = weights
        self.bias = bias
        self.calls = 0

    def score(self, hypothesis):
        return self.bias + sum(self.weights.get(w, 0.0) for w in hypothesis.lower().split())

    def predict_proba(self, dialogue, hypothesis):
        self.calls += 1
        p = 1.0 / (1.0 + math.exp(-self.score(hypothesis)))
        return 1.0 - p, p


@pytest.fixture(scope="session")
def toy_table():
    return build_toy_table(seed=0)


@pytest.fixture
def tiny_table():
    return EmbeddingTable(
        ["good", "great", "fine", "bad", "movie"],
        np.array([[1.0, 0.0], [0.9, 0.1], [0.6, 0.8], [-1.0, 0.0], [0.0, 1.0]]),
    )


@pytest.fixture(scope="session")
def synthetic_ds(toy_table):
    return generate_synthetic(60, seed=1, vocab=toy_table)


@pytest.fixture(scope="session")
def splits(synthetic_ds):
    train, dev, test = split_dataset(synthetic_ds, (0.7, 0.1, 0.2), seed=1)
    return {"train": train, "dev": dev, "test": test}


@pytest.fixture(scope="session")
def micro_victim(toy_table, splits):
    config = TrainConfig(batch_size=8, learning_rate=0.1, epochs=15, seed=3)
    return train_standard(toy_table, splits["train"], splits["dev"], config, hidden_dim=16)


@pytest.fixture
def small_dataset():
    return Dataset(
        "small",
        [
            make_example("john bought the car .", True, "ex_0"),
            make_example("mary sold the boat .", False, "ex_1"),
            make_example("john never bought the car .", False, "ex_2"),
        ],
    )
