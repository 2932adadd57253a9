from __future__ import annotations

import logging

import numpy as np

from convattack.embedding.table import EmbeddingTable, nearest_synonyms

_logger = logging.getLogger(__name__)


def synonym_centroid_table(
    table: EmbeddingTable, min_cos_sim: float = 0.5, max_candidates: int = 10
) -> EmbeddingTable:
    """Replaces every vector by the centroid of itself and its admissible synonyms.

    A classifier reading the returned table sees a word and its near neighbours as
    almost the same input. Quadratic in the vocabulary size.
    """
    vectors = np.empty_like(table.vectors)
    for i, token in enumerate(table.tokens):
        members = [i] + [
            table.index(c.token)
            for c in nearest_synonyms(table, token, max_candidates, min_cos_sim)
        ]
        centroid = table.vectors[members].mean(axis=0)
        vectors[i] = centroid if np.linalg.norm(centroid) > 0 else table.vectors[i]
    _logger.info(
        "built synonym-centroid table (min_cos_sim=%s, max_candidates=%d)",
        min_cos_sim,
        max_candidates,
    )
    return EmbeddingTable(table.tokens, vectors)
