"""Static word embeddings: loading, cosine similarity and synonym candidates.

Text format: an optional first line ``V d``, then one ``token v1 ... vd`` entry per
line, space separated, UTF-8.
"""
from __future__ import annotations

import hashlib
import logging
import math
from pathlib import Path
from typing import Iterable

import attr
import numpy as np

from convattack.abstractions.types import Matrix, Vector
from convattack.utils.errors import ConfigError, DataError, OutOfVocabulary, is_whole

_logger = logging.getLogger(__name__)


@attr.s(frozen=True, eq=False, repr=False)
class EmbeddingTable:
    tokens: tuple[str, ...] = attr.ib(converter=tuple)
    vectors: Matrix = attr.ib()
    norms: Vector = attr.ib(init=False)
    _index: dict[str, int] = attr.ib(init=False)
    _lex_rank: np.ndarray = attr.ib(init=False)

    def __attrs_post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(self.tokens):
            raise DataError(
                f"expected a {len(self.tokens)}xd matrix, got shape {vectors.shape}"
            )
        if len(self.tokens) and vectors.shape[1] < 1:
            raise DataError("embedding dimension must be positive")
        if not np.all(np.isfinite(vectors)):
            row = int(np.argwhere(~np.isfinite(vectors))[0][0])
            raise DataError(f"non-finite value in the vector of {self.tokens[row]!r}")
        index = {}
        for i, token in enumerate(self.tokens):
            if token in index:
                raise DataError(f"duplicate token {token!r}")
            index[token] = i
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(norms == 0):
            raise DataError(f"zero vector for token {self.tokens[int(np.argmin(norms))]!r}")
        vectors.setflags(write=False)
        norms.setflags(write=False)
        lex_rank = np.empty(len(self.tokens), dtype=np.int64)
        lex_rank[np.argsort(np.array(self.tokens, dtype=object), kind="stable")] = np.arange(
            len(self.tokens)
        )
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_lex_rank", lex_rank)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token) -> bool:
        return token in self._index

    def __repr__(self):
        return f"EmbeddingTable(V={len(self)}, dim={self.dim})"

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise OutOfVocabulary(token) from None

    def known_indices(self, tokens: Iterable[str]) -> list[int]:
        """Row indices of the tokens in the table, in order; unknown tokens are skipped."""
        return [self._index[t] for t in tokens if t in self._index]

    def get(self, token: str) -> Vector | None:
        i = self._index.get(token)
        return None if i is None else self.vectors[i]

    def __getitem__(self, token: str) -> Vector:
        return self.vectors[self.index(token)]

    def cosines_to(self, i: int) -> Vector:
        sims = (self.vectors @ self.vectors[i]) / (self.norms * self.norms[i])
        return np.clip(sims, -1.0, 1.0)

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update("\n".join(self.tokens).encode("utf-8"))
        digest.update(np.ascontiguousarray(self.vectors).tobytes())
        return digest.hexdigest()


@attr.s(frozen=True, slots=True)
class SynonymCandidate:
    token: str = attr.ib()
    cosine: float = attr.ib()


def cosine_sim(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise DataError(
            f"cosine_sim needs equal-length vectors, got {u.shape} and {v.shape}"
        )
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise DataError("cosine_sim is undefined for a zero vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def nearest_synonyms(
    table: EmbeddingTable, token: str, max_candidates: int, min_cos_sim: float
) -> list[SynonymCandidate]:
    """Neighbours of `token` with cosine >= min_cos_sim, best first.

    Ties in cosine are broken by token order. Raises OutOfVocabulary for unknown
    tokens; callers in the attack treat that as "skip this position".
    """
    if not is_whole(max_candidates) or max_candidates < 1:
        raise ConfigError(f"max_candidates must be a positive integer, got {max_candidates}")
    if not 0.0 <= min_cos_sim <= 1.0:
        raise ConfigError(f"min_cos_sim must be in [0, 1], got {min_cos_sim}")
    i = table.index(token)
    sims = table.cosines_to(i)
    mask = sims >= min_cos_sim
    mask[i] = False
    idx = np.flatnonzero(mask)
    order = idx[np.lexsort((table._lex_rank[idx], -sims[idx]))][: int(max_candidates)]
    return [SynonymCandidate(table.tokens[j], float(sims[j])) for j in order]


def _parse_float(text: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"line {lineno}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise DataError(f"line {lineno}: non-finite value {text!r}")
    return value


def _is_header(fields: list[str]) -> bool:
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    tokens, rows = [], []
    declared = None
    dim = None
    seen: dict[str, int] = {}
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if lineno == 1 and _is_header(fields):
                declared = (int(fields[0]), int(fields[1]))
                dim = declared[1]
                continue
            token, values = fields[0], fields[1:]
            if dim is None:
                dim = len(values)
            if len(values) != dim or dim == 0:
                raise DataError(
                    f"{path}: dimension mismatch at line {lineno}: "
                    f"expected {dim} values, got {len(values)}"
                )
            if token in seen:
                raise DataError(
                    f"{path}: duplicate token {token!r} at line {lineno} "
                    f"(first seen at line {seen[token]})"
                )
            seen[token] = lineno
            row = [_parse_float(v, lineno) for v in values]
            if not any(row):
                raise DataError(f"{path}: zero vector for {token!r} at line {lineno}")
            tokens.append(token)
            rows.append(row)
    if declared is not None and declared[0] != len(tokens):
        raise DataError(f"{path}: header declares {declared[0]} tokens, found {len(tokens)}")
    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), dim or 0)
    table = EmbeddingTable(tokens, vectors)
    _logger.debug("loaded %r from %s", table, path)
    return table


def save_embeddings(table: EmbeddingTable, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(table)} {table.dim}\n")
        for token, row in zip(table.tokens, table.vectors):
            f.write(token + " " + " ".join(repr(float(v)) for v in row) + "\n")
    return path
