"""Reviewer feedback features from genuine reviews, plus fraud review impact."""

from __future__ import annotations

from rankfraud.config.schema import RankFraudConfig
from rankfraud.review.feedback import feedback_features
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels


class FeedbackExtractor:
    name = "feedback"

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult:
        fb = feedback_features(inputs.genuine, inputs.reviews, models.lexicons, list(config.review.text_fields))
        return ExtractorResult(
            values={"malW": fb.mal_w, "fraudW": fb.fraud_w, "goodW": fb.good_w, "FRI": fb.fri},
            flags=["no_genuine_reviews"] if fb.degenerate else [],
        )
