"""Install-to-rating and install-to-review ratio features."""

from __future__ import annotations

from collections.abc import Sequence

from pydantic import BaseModel

from rankfraud.config.defaults import DEFAULT_BUCKET_BOUNDARIES
from rankfraud.core.errors import ValidationError
from rankfraud.irr.buckets import bucket_of
from rankfraud.types.market import AppSnapshot


class RatioFeatures(BaseModel):
    i1rt1: float
    i2rt2: float
    i1rv1: float
    i2rv2: float


def _ratio(num: int, den: int) -> float:
    # A zero lower endpoint (the (0,1] bucket) divides as 1.
    return num / (den if den > 0 else 1)


def ratio_features(
    snapshot: AppSnapshot | None,
    genuine_review_count: int | None = None,
    boundaries: Sequence[int] = DEFAULT_BUCKET_BOUNDARIES,
) -> RatioFeatures:
    """Endpoint ratios of the install bucket over the rating and review-count buckets.

    The review-count bucket is taken from ``genuine_review_count``, the number of
    reviews the filter kept; feature extraction always passes it. Without it the
    snapshot's published review count is used.
    """
    if snapshot is None or snapshot.install_bucket is None:
        raise ValidationError("ratio features need a snapshot with an install bucket")
    i1, i2 = snapshot.install_bucket
    rt1, rt2 = bucket_of(snapshot.rating_count, boundaries)
    reviews = snapshot.review_count if genuine_review_count is None else genuine_review_count
    rv1, rv2 = bucket_of(reviews, boundaries)
    return RatioFeatures(
        i1rt1=_ratio(i1, rt1),
        i2rt2=_ratio(i2, rt2),
        i1rv1=_ratio(i1, rv1),
        i2rv2=_ratio(i2, rv2),
    )
