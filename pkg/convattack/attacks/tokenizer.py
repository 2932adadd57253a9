from __future__ import annotations

import re
import unicodedata
from typing import Iterable, Mapping

import attr

_CHUNK = re.compile(r"\S+")


@attr.s(frozen=True, slots=True)
class Token:
    text: str = attr.ib()  # lowercased
    start: int = attr.ib()
    end: int = attr.ib()
    is_punct: bool = attr.ib(default=False)


def is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[Token]:
    """Lowercased whitespace tokens with leading/trailing punctuation split off.

    >>> [t.text for t in tokenize("Good, thanks!")]
    ['good', ',', 'thanks', '!']
    """
    tokens = []
    for match in _CHUNK.finditer(text):
        chunk, offset = match.group(), match.start()
        i, j = 0, len(chunk)
        while i < j and is_punctuation(chunk[i]):
            tokens.append(Token(chunk[i], offset + i, offset + i + 1, True))
            i += 1
        trailing = []
        while j > i and is_punctuation(chunk[j - 1]):
            trailing.append(Token(chunk[j - 1], offset + j - 1, offset + j, True))
            j -= 1
        if i < j:
            tokens.append(Token(chunk[i:j].lower(), offset + i, offset + j))
        tokens.extend(reversed(trailing))
    return tokens


def detokenize(
    text: str,
    tokens: list[Token],
    replacements: Mapping[int, str] | None = None,
    deletions: Iterable[int] = (),
) -> str:
    """Rebuilds `text`, substituting or dropping tokens by index.

    Untouched tokens and all whitespace are copied from the original, so with no
    edits the result equals `text`.
    """
    replacements = replacements or {}
    deletions = set(deletions)
    if not replacements and not deletions:
        return text
    pieces, cursor = [], 0
    for i, token in enumerate(tokens):
        pieces.append(text[cursor : token.start])
        if i not in deletions:
            pieces.append(replacements.get(i, text[token.start : token.end]))
        cursor = token.end
    pieces.append(text[cursor:])
    return "".join(pieces)


def words(text: str) -> list[str]:
    """Lowercased non-punctuation tokens."""
    return [t.text for t in tokenize(text) if not t.is_punct]
