"""Pooled-embedding features standing in for a sentence-pair encoder.

x = [mean_u; mean_v; |mean_u - mean_v|; mean_u * mean_v], where mean_u pools the
premise and mean_v the hypothesis. Tokens missing from the table are skipped; a side
with no known tokens pools to the zero vector.
"""
from __future__ import annotations

import numpy as np

from convattack.abstractions.example import Dataset, EntailmentExample
from convattack.abstractions.types import Matrix, Vector
from convattack.attacks.tokenizer import tokenize
from convattack.embedding.table import EmbeddingTable

# features of one example, length 4 * table.dim
Representation = Vector


def pooled_mean(table: EmbeddingTable, text: str) -> Vector:
    rows = table.known_indices(t.text for t in tokenize(text))
    if not rows:
        return np.zeros(table.dim)
    return table.vectors[rows].mean(axis=0)


def compose(mean_u: Vector, mean_v: Vector) -> Representation:
    return np.concatenate([mean_u, mean_v, np.abs(mean_u - mean_v), mean_u * mean_v])


def featurize_texts(table: EmbeddingTable, premise: str, hypothesis: str) -> Representation:
    return compose(pooled_mean(table, premise), pooled_mean(table, hypothesis))


def featurize(table: EmbeddingTable, example: EntailmentExample) -> Representation:
    return featurize_texts(table, example.premise, example.hypothesis)


def featurize_dataset(table: EmbeddingTable, ds: Dataset) -> tuple[Matrix, np.ndarray]:
    X = np.zeros((len(ds), 4 * table.dim))
    for i, example in enumerate(ds):
        X[i] = featurize(table, example)
    return X, np.array(ds.labels, dtype=np.int64)
