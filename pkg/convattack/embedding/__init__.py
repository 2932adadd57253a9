from convattack.embedding.centroid import synonym_centroid_table
from convattack.embedding.table import (
    EmbeddingTable,
    SynonymCandidate,
    cosine_sim,
    load_embeddings,
    nearest_synonyms,
    save_embeddings,
)
from convattack.embedding.toy import build_toy_table
