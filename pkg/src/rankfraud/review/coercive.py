"""Keyword scan for coercive review campaigns.

Apps that push users into rating them (in exchange for in-game rewards, for
instance) leave traces in genuine reviews that complain about it.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

import structlog
from pydantic import BaseModel

from rankfraud.core.errors import ValidationError
from rankfraud.review.filter import ReviewFilter
from rankfraud.storage.dataset import DatasetStore
from rankfraud.utils.text import contains_phrase, tokenize

logger = structlog.get_logger()


class CoerciveHit(BaseModel):
    app_id: str
    review_id: str
    keywords: list[str]


class CoerciveApp(BaseModel):
    app_id: str
    reviews: int


def coercive_scan(
    store: DatasetStore,
    keywords: Sequence[tuple[str, ...] | str],
    review_filter: ReviewFilter,
    text_fields: list[str] | None = None,
) -> list[CoerciveHit]:
    """Genuine reviews mentioning at least one keyword.

    Hits are grouped by app, apps ordered by descending hit count (then
    app_id), reviews by review_id. Only reviews ``review_filter`` leaves
    unflagged are matched.
    """
    phrases = [tuple(k.split()) if isinstance(k, str) else tuple(k) for k in keywords]
    phrases = [p for p in phrases if p]
    if not phrases:
        raise ValidationError("coercive_scan needs at least one keyword")

    hits: list[CoerciveHit] = []
    for app_id in store.apps:
        reviews = list(store.app_reviews[app_id])
        if not reviews:
            continue
        matched: list[tuple[int, list[str]]] = []
        for i, review in enumerate(reviews):
            tokens = tokenize(review.body(text_fields))
            found = [" ".join(p) for p in phrases if contains_phrase(tokens, p)]
            if found:
                matched.append((i, found))
        if not matched:
            continue
        flags = review_filter.flags(store, [reviews[i] for i, _ in matched])
        matched = [m for m, flag in zip(matched, flags, strict=True) if flag == 0]
        hits.extend(CoerciveHit(app_id=app_id, review_id=reviews[i].review_id, keywords=found) for i, found in matched)

    per_app = Counter(h.app_id for h in hits)
    hits.sort(key=lambda h: (-per_app[h.app_id], h.app_id, h.review_id))
    logger.info("coercive.scanned", hits=len(hits), apps=len(per_app))
    return hits


def rank_coercive_apps(hits: Sequence[CoerciveHit], min_reviews: int = 2) -> list[CoerciveApp]:
    """Apps with at least ``min_reviews`` matching genuine reviews, most first."""
    per_app = Counter(h.app_id for h in hits)
    ranked = sorted(per_app.items(), key=lambda kv: (-kv[1], kv[0]))
    return [CoerciveApp(app_id=a, reviews=c) for a, c in ranked if c >= min_reviews]
