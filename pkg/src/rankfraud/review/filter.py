"""Fraudulent review filter: a trained classifier over review features."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import structlog
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from rankfraud.core.errors import ModelError, SchemaMismatchError
from rankfraud.learn.base import Classifier
from rankfraud.learn.models import ModelClassifier
from rankfraud.review.features import review_matrix
from rankfraud.review.sentiment import SentimentModel
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.schema import FORMAT_VERSION
from rankfraud.types.features import REVIEW_SCHEMA
from rankfraud.types.market import Review
from rankfraud.types.model import TrainedModel

logger = structlog.get_logger()


@dataclass
class ReviewFilter:
    classifier: Classifier | None
    sentiment: SentimentModel
    text_fields: list[str] = field(default_factory=lambda: ["title", "text"])

    def flags(self, store: DatasetStore, reviews: list[Review]) -> np.ndarray:
        """1 for reviews classified fraudulent, 0 for genuine."""
        if self.classifier is None:
            raise ModelError("Review filter has no trained model")
        if not reviews:
            return np.zeros(0, dtype=int)
        x = review_matrix(store, reviews, self.sentiment, self.text_fields)
        return np.asarray(self.classifier.predict(x), dtype=int)


@dataclass(frozen=True)
class ReviewPartition:
    genuine: list[Review]
    fraudulent: list[Review]


def filter_fraud_reviews(store: DatasetStore, app_id: str, review_filter: ReviewFilter | None) -> ReviewPartition:
    if review_filter is None or review_filter.classifier is None:
        raise ModelError("filter_fraud_reviews needs a trained review filter")
    reviews = list(store.reviews_of(app_id))
    flags = review_filter.flags(store, reviews)
    genuine = [r for r, f in zip(reviews, flags, strict=True) if f == 0]
    fraudulent = [r for r, f in zip(reviews, flags, strict=True) if f == 1]
    logger.debug("review_filter.partitioned", app_id=app_id, genuine=len(genuine), fraudulent=len(fraudulent))
    return ReviewPartition(genuine=genuine, fraudulent=fraudulent)


def review_training_set(
    store: DatasetStore,
    sentiment: SentimentModel,
    *,
    max_fraud_per_account: int | None = 2,
    text_fields: list[str] | None = None,
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Labeled reviews as (matrix, labels, review_ids), fraudulent = 1.

    At most ``max_fraud_per_account`` fraudulent reviews per account are kept
    (earliest first), so prolific fraud accounts do not dominate the set.
    """
    chosen: list[Review] = []
    labels: list[int] = []
    per_account: dict[str, int] = {}
    labeled = sorted(
        (store.reviews[rid] for rid in store.labels.reviews),
        key=lambda r: (r.reviewer_id, r.date, r.review_id),
    )
    for review in labeled:
        label = store.labels.reviews[review.review_id]
        if label == "fraudulent":
            taken = per_account.get(review.reviewer_id, 0)
            if max_fraud_per_account is not None and taken >= max_fraud_per_account:
                continue
            per_account[review.reviewer_id] = taken + 1
        chosen.append(review)
        labels.append(1 if label == "fraudulent" else 0)

    order = sorted(range(len(chosen)), key=lambda i: chosen[i].review_id)
    chosen = [chosen[i] for i in order]
    y = np.asarray([labels[i] for i in order], dtype=int)
    x = review_matrix(store, chosen, sentiment, text_fields)
    logger.info("review_filter.training_set", rows=len(y), fraudulent=int(y.sum()), accounts=len(per_account))
    return x, y, [r.review_id for r in chosen]


class ReviewFilterDocument(BaseModel):
    """On-disk form of a review filter: classifier plus the sentiment tagger it was trained with."""

    format_version: str = FORMAT_VERSION
    model: TrainedModel
    sentiment: SentimentModel
    text_fields: list[str] = ["title", "text"]

    def to_filter(self) -> ReviewFilter:
        return ReviewFilter(ModelClassifier(self.model), self.sentiment, list(self.text_fields))


def save_review_filter(document: ReviewFilterDocument, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = document.model_dump(mode="json")
    target.write_text(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")
    return target


def load_review_filter(path: str | Path) -> ReviewFilterDocument:
    source = Path(path)
    if not source.exists():
        raise ModelError(f"Review filter file not found: {source}")
    try:
        document = ReviewFilterDocument(**json.loads(source.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, PydanticValidationError, TypeError) as exc:
        raise ModelError(f"Invalid review filter file {source}: {exc}") from exc
    if document.model.schema_version != REVIEW_SCHEMA:
        raise SchemaMismatchError(REVIEW_SCHEMA, document.model.schema_version)
    return document
