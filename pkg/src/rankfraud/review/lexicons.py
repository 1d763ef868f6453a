"""Indicator-word lexicons for malware, fraud and benign feedback."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import structlog

from rankfraud.config.defaults import (
    DEFAULT_BENIGN_LEXICON,
    DEFAULT_COERCIVE_KEYWORDS,
    DEFAULT_FRAUD_LEXICON,
    DEFAULT_MALWARE_LEXICON,
    LEXICON_TARGET_SIZES,
)
from rankfraud.core.errors import ValidationError
from rankfraud.utils.text import read_word_list

logger = structlog.get_logger()


@dataclass(frozen=True)
class IndicatorLexicons:
    malware: frozenset[str]
    fraud: frozenset[str]
    benign: frozenset[str]

    def sizes(self) -> dict[str, int]:
        return {"malware": len(self.malware), "fraud": len(self.fraud), "benign": len(self.benign)}


def load_lexicons(
    malware_path: str | Path | None = None,
    fraud_path: str | Path | None = None,
    benign_path: str | Path | None = None,
) -> IndicatorLexicons:
    lexicons = IndicatorLexicons(
        malware=frozenset(read_word_list(malware_path or DEFAULT_MALWARE_LEXICON)),
        fraud=frozenset(read_word_list(fraud_path or DEFAULT_FRAUD_LEXICON)),
        benign=frozenset(read_word_list(benign_path or DEFAULT_BENIGN_LEXICON)),
    )
    validate_lexicons(lexicons)
    return lexicons


def validate_lexicons(lexicons: IndicatorLexicons) -> None:
    """Lexicons must be pairwise disjoint; size drift from the reference counts is only logged."""
    pairs = [("malware", "fraud"), ("malware", "benign"), ("fraud", "benign")]
    for a, b in pairs:
        shared = getattr(lexicons, a) & getattr(lexicons, b)
        if shared:
            raise ValidationError(f"Lexicons '{a}' and '{b}' share words: {', '.join(sorted(shared))}")

    sizes = lexicons.sizes()
    for name, size in sizes.items():
        target = LEXICON_TARGET_SIZES[name]
        if size != target:
            logger.warning("lexicons.size_mismatch", lexicon=name, loaded=size, expected=target)
    logger.debug("lexicons.loaded", **sizes)


def load_keywords(path: str | Path | None = None) -> list[tuple[str, ...]]:
    """Coercive-campaign keywords; multi-word entries match as token phrases."""
    return [tuple(entry.split()) for entry in read_word_list(path or DEFAULT_COERCIVE_KEYWORDS)]
