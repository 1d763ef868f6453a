"""Indicator-word feedback from genuine reviews and fraud review impact."""

from __future__ import annotations

from collections.abc import Sequence

from pydantic import BaseModel

from rankfraud.review.lexicons import IndicatorLexicons
from rankfraud.types.market import Review
from rankfraud.utils.text import contains_any, tokenize


class FeedbackFeatures(BaseModel):
    mal_w: float = 0.0
    fraud_w: float = 0.0
    good_w: float = 0.0
    fri: float = 0.0
    degenerate: bool = False


def _mean_rating(reviews: Sequence[Review]) -> float:
    return sum(r.rating for r in reviews) / len(reviews)


def fraud_review_impact(all_reviews: Sequence[Review], genuine: Sequence[Review]) -> float:
    """|mean rating of all reviews - mean rating of genuine ones|."""
    if not all_reviews or not genuine or len(genuine) == len(all_reviews):
        return 0.0
    return abs(_mean_rating(all_reviews) - _mean_rating(genuine))


def feedback_features(
    genuine: Sequence[Review],
    all_reviews: Sequence[Review],
    lexicons: IndicatorLexicons,
    text_fields: list[str] | None = None,
) -> FeedbackFeatures:
    fri = fraud_review_impact(all_reviews, genuine)
    if not genuine:
        return FeedbackFeatures(fri=fri, degenerate=True)

    mal = fraud = good = 0
    for review in genuine:
        tokens = set(tokenize(review.body(text_fields)))
        mal += contains_any(tokens, lexicons.malware)
        fraud += contains_any(tokens, lexicons.fraud)
        good += contains_any(tokens, lexicons.benign)

    n = len(genuine)
    return FeedbackFeatures(mal_w=100.0 * mal / n, fraud_w=100.0 * fraud / n, good_w=100.0 * good / n, fri=fri)
