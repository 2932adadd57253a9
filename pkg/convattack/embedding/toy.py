from __future__ import annotations

import numpy as np

from convattack.corpus import lexicon
from convattack.embedding.table import EmbeddingTable
from convattack.utils.consts import DEFAULT_EMBEDDING_DIM
from convattack.utils.errors import ConfigError

# cosine of each spelling variant ("car_1" ... "car_7") to its base word
VARIANT_COSINES = (0.95, 0.85, 0.75, 0.65, 0.55, 0.45, 0.35)


def variant_token(word: str, k: int) -> str:
    return f"{word}_{k}"


def build_toy_table(
    seed: int, dim: int = DEFAULT_EMBEDDING_DIM, variant_cosines=VARIANT_COSINES
) -> EmbeddingTable:
    """Gaussian vectors for the synthetic lexicon plus graded variants of each content word.

    Variant k of a word sits at exactly `variant_cosines[k-1]` cosine from it and keeps
    its norm, so lowering min_cos_sim admits variants one band at a time.
    """
    if dim < 2:
        raise ConfigError(f"toy tables need dim >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    words = list(dict.fromkeys(lexicon.FUNCTION_WORDS + lexicon.CONTENT_WORDS))
    base = rng.standard_normal((len(words), dim))
    tokens = list(words)
    rows = [base]
    position = {w: i for i, w in enumerate(words)}
    for word in lexicon.CONTENT_WORDS:
        w = base[position[word]]
        norm = np.linalg.norm(w)
        unit = w / norm
        variants = np.empty((len(variant_cosines), dim))
        for k, cos in enumerate(variant_cosines):
            r = rng.standard_normal(dim)
            r -= (r @ unit) * unit
            r /= np.linalg.norm(r)
            variants[k] = norm * (cos * unit + np.sqrt(1.0 - cos**2) * r)
            tokens.append(variant_token(word, k + 1))
        rows.append(variants)
    return EmbeddingTable(tokens, np.vstack(rows))
