"""Feature extractor protocol and the per-app inputs extractors share."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from pydantic import BaseModel

from rankfraud.config.schema import RankFraudConfig
from rankfraud.permissions.catalog import PermissionCatalog
from rankfraud.review.filter import ReviewFilter
from rankfraud.review.lexicons import IndicatorLexicons
from rankfraud.storage.dataset import DatasetStore
from rankfraud.types.market import AppSnapshot, Review


@dataclass(frozen=True)
class FeatureModels:
    """Trained and loaded resources feature extraction depends on."""

    review_filter: ReviewFilter
    lexicons: IndicatorLexicons
    catalog: PermissionCatalog


@dataclass(frozen=True)
class AppInputs:
    store: DatasetStore
    app_id: str
    reviews: tuple[Review, ...]
    snapshots: tuple[AppSnapshot, ...]
    genuine: list[Review] = field(default_factory=list)
    fraudulent: list[Review] = field(default_factory=list)


class ExtractorResult(BaseModel):
    # Keyed by canonical feature name.
    values: dict[str, float] = {}
    flags: list[str] = []


class FeatureExtractor(Protocol):
    name: str

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult: ...
