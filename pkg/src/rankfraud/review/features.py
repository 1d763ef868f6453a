"""Review-level features for the fraudulent review filter."""

from __future__ import annotations

import numpy as np

from rankfraud.review.sentiment import SentimentModel
from rankfraud.storage.dataset import DatasetStore
from rankfraud.types.features import REVIEW_FEATURE_NAMES, ReviewFeatures
from rankfraud.types.market import Review


def review_features(
    store: DatasetStore,
    review: Review,
    sentiment: SentimentModel,
    text_fields: list[str] | None = None,
) -> ReviewFeatures:
    """Features of one review, seen from its author.

    ``expertise`` and ``bias`` count distinct apps in the reviewer's history:
    the app's similar apps and the developer's other apps. A history holds
    one entry per reviewed app, including apps outside the dataset, so each
    counted app stands for one review by the reviewer.
    """
    app = store.app(review.app_id)
    profile = store.profile(review.reviewer_id)
    history = store.history_of(review.reviewer_id)

    similar = set(app.similar_app_ids) - {app.app_id}
    same_developer = store.developer_apps.get(app.developer_id, frozenset()) - {app.app_id}

    own = store.reviewer_reviews.get(review.reviewer_id, ())
    below = sum(1 for r in own if r.rating < review.rating)
    percentile = 100.0 * below / len(own) if own else 0.0

    pct_pos, pct_neg = sentiment.sentence_shares(review.body(text_fields))

    return ReviewFeatures(
        expertise=len(history & similar),
        bias=len(history & same_developer),
        money_paid=profile.money_paid_total,
        liked_count=profile.liked_app_count,
        follower_count=profile.follower_count,
        pct_positive_sentences=pct_pos,
        pct_negative_sentences=pct_neg,
        rating=review.rating,
        rating_percentile=percentile,
        imputed_profile=profile.imputed,
    )


def review_matrix(
    store: DatasetStore,
    reviews: list[Review],
    sentiment: SentimentModel,
    text_fields: list[str] | None = None,
) -> np.ndarray:
    if not reviews:
        return np.zeros((0, len(REVIEW_FEATURE_NAMES)))
    return np.asarray([review_features(store, r, sentiment, text_fields).vector() for r in reviews], dtype=float)
