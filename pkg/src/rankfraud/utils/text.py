"""Text utilities: sentence splitting, tokenizing, word-list files."""

from __future__ import annotations

import re
from collections.abc import Iterable
from pathlib import Path

# Period-terminated tokens that do not end a sentence.
ABBREVIATIONS = frozenset(
    {
        "e.g.",
        "i.e.",
        "etc.",
        "vs.",
        "mr.",
        "mrs.",
        "ms.",
        "dr.",
        "st.",
        "jr.",
        "sr.",
        "no.",
        "approx.",
        "min.",
        "max.",
        "ver.",
        "v.",
    }
)

_BOUNDARY = re.compile(r"[.!?]+(?=\s|$)")
_TOKEN = re.compile(r"\w+(?:'\w+)*")


def sentence_split(text: str) -> list[str]:
    """Split on '.', '!' or '?' runs followed by whitespace or end of text."""
    sentences: list[str] = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        chunk = text[start : m.end()]
        words = chunk.split()
        if m.group() == "." and words and words[-1].lower() in ABBREVIATIONS:
            continue
        if chunk.strip():
            sentences.append(chunk.strip())
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(text: str) -> list[str]:
    """Case-folded word tokens, any script, with punctuation stripped."""
    return _TOKEN.findall(text.casefold())


def contains_any(tokens: Iterable[str], words: frozenset[str]) -> bool:
    return any(t in words for t in tokens)


def contains_phrase(tokens: list[str], phrase: tuple[str, ...]) -> bool:
    if not phrase:
        return False
    if len(phrase) == 1:
        return phrase[0] in tokens
    n = len(phrase)
    return any(tuple(tokens[i : i + n]) == phrase for i in range(len(tokens) - n + 1))


def read_word_list(path: str | Path) -> list[str]:
    """One entry per line; '#' starts a comment; entries are case-folded like tokens."""
    entries: list[str] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip().casefold()
        if line:
            entries.append(line)
    return entries
