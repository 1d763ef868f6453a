"""Stage 2: Review filter: train (or load) the fraudulent review classifier."""

from __future__ import annotations

import structlog

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.context import RunContext
from rankfraud.core.errors import PipelineError, ValidationError
from rankfraud.core.pipeline import PipelineStage
from rankfraud.learn.models import train
from rankfraud.review.filter import ReviewFilterDocument, load_review_filter, review_training_set, save_review_filter
from rankfraud.review.sentiment import SentimentModel, load_sentiment_corpus, train_sentiment
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.storage.ingest import resolve_asset
from rankfraud.types.features import REVIEW_FEATURE_NAMES, REVIEW_SCHEMA
from rankfraud.utils.progress import console, stage_header

logger = structlog.get_logger()


def build_sentiment(config: RankFraudConfig, store: DatasetStore | None = None) -> SentimentModel:
    corpus = load_sentiment_corpus(resolve_asset("sentiment_corpus", config.assets, store))
    return train_sentiment(corpus, config.sentiment.alpha)


def build_review_filter(store: DatasetStore, config: RankFraudConfig, *, seed: int | None = None) -> ReviewFilterDocument:
    """Train the sentiment tagger and the review classifier on the store's labeled reviews."""
    sentiment = build_sentiment(config, store)
    x, y, _ = review_training_set(
        store,
        sentiment,
        max_fraud_per_account=config.review.max_fraud_reviews_per_account,
        text_fields=list(config.review.text_fields),
    )
    if len(y) == 0:
        raise ValidationError("The dataset has no labeled reviews to train a review filter on")
    model = train(
        x,
        y,
        config.learn.review_learner,
        seed=config.seed if seed is None else seed,
        config=config.learn,
        feature_names=REVIEW_FEATURE_NAMES,
        schema_version=REVIEW_SCHEMA,
    )
    return ReviewFilterDocument(model=model, sentiment=sentiment, text_fields=list(config.review.text_fields))


class ReviewFilterStage(PipelineStage):
    name = "review-filter"
    description = "Train fraudulent review filter"

    def __init__(self, storage: FileSystemStorage) -> None:
        self.storage = storage

    def execute(self, ctx: RunContext) -> RunContext:
        stage_header(self.name, self.description)
        if ctx.store is None:
            raise PipelineError("Dataset required", self.name)

        if ctx.review_filter_path is not None:
            document = load_review_filter(ctx.review_filter_path)
            console.print(f"  Using review filter [cyan]{ctx.review_filter_path}[/cyan]")
        else:
            document = build_review_filter(ctx.store, ctx.config)
            save_review_filter(document, self.storage.path("review_filter.json"))
            console.print(f"  [green]Trained[/green] {document.model.learner} review filter")

        ctx.review_filter = document.to_filter()
        return ctx
