from __future__ import annotations

import logging
import re
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from convattack.attacks.tokenizer import Token

if TYPE_CHECKING:
    from convattack.attacks.results import AttackConfig

_logger = logging.getLogger(__name__)

_NUMERIC = re.compile(r"[+-]?(\d+([.,:/]\d+)*|[.,]\d+)(st|nd|rd|th|s|%)?")


def _read_token_lines(text: str) -> frozenset[str]:
    tokens = (line.strip().lower() for line in text.splitlines())
    return frozenset(t for t in tokens if t and not t.startswith("#"))


def default_stopwords() -> frozenset[str]:
    """The stopword list shipped with the package."""
    source = resources.files("convattack.attacks").joinpath("resources/stopwords.txt")
    return _read_token_lines(source.read_text(encoding="utf-8"))


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        return default_stopwords()
    stopwords = _read_token_lines(Path(path).read_text(encoding="utf-8"))
    _logger.debug("loaded %d stopwords from %s", len(stopwords), path)
    return stopwords


# a lexicon file has the same one-token-per-line format
load_lexicon = load_stopwords


def dump_stopwords(stopwords: Iterable[str]) -> str:
    return "".join(f"{word}\n" for word in sorted(stopwords))


def is_numeric(text: str) -> bool:
    return _NUMERIC.fullmatch(text) is not None


def modifiable_positions(
    tokens: list[Token], config: AttackConfig, stopwords: frozenset[str]
) -> list[int]:
    """Indices the attack may swap: no stopwords, punctuation or numerals.

    When the config carries a lexicon, only tokens in it qualify.
    """
    lexicon = config.pos_lexicon
    return [
        i
        for i, token in enumerate(tokens)
        if not token.is_punct
        and token.text not in stopwords
        and not is_numeric(token.text)
        and (lexicon is None or token.text in lexicon)
    ]
