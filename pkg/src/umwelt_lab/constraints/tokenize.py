"""Offset-preserving word/punctuation tokenizer."""

from __future__ import annotations

import re
from dataclasses import dataclass

APOSTROPHES = "'’"

# A word is a run of letters/digits, optionally joined by internal apostrophes
# ("it's", "don't", "o'clock"). Everything else that is not whitespace becomes a
# single-character punctuation token.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*|[^\s]", re.UNICODE)
_WORD_START = re.compile(r"[^\W_]", re.UNICODE)


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    start: int
    end: int
    is_word: bool

    @property
    def norm(self) -> str:
        """Case-folded surface with typographic apostrophes normalised to ASCII."""
        return self.lower.replace("’", "'")


def tokenize(text: str) -> list[Token]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        s = m.group()
        tokens.append(Token(s, s.casefold(), m.start(), m.end(), bool(_WORD_START.match(s))))
    return tokens


def words(text: str) -> list[Token]:
    return [t for t in tokenize(text) if t.is_word]


def word_count(text: str | None) -> int:
    if not text:
        return 0
    return sum(1 for t in tokenize(text) if t.is_word)


def split_contraction(token: Token) -> tuple[str, str | None]:
    """Split ``it's`` into ``("it", "s")``; tokens without an apostrophe give ``(word, None)``.

    Only the last apostrophe counts, so ``y'all've`` splits as ``("y'all", "ve")``.
    """
    norm = token.norm
    idx = norm.rfind("'")
    if idx <= 0:
        return norm, None
    return norm[:idx], norm[idx + 1 :]
