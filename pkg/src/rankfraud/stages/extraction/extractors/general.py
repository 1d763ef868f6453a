"""General app features: average rating, review, rating and install counts."""

from __future__ import annotations

from rankfraud.config.schema import RankFraudConfig
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels


class GeneralExtractor:
    name = "general"

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult:
        snap = inputs.snapshots[-1] if inputs.snapshots else None
        collected_avg = sum(r.rating for r in inputs.reviews) / len(inputs.reviews) if inputs.reviews else 0.0
        if snap is None:
            return ExtractorResult(
                values={
                    "avgRating": collected_avg,
                    "reviewCt": float(len(inputs.reviews)),
                    "ratingCt": 0.0,
                    "installLower": 0.0,
                },
                flags=["no_snapshot"],
            )
        # Market-reported values win over what was collected.
        return ExtractorResult(
            values={
                "avgRating": snap.aggregate_rating if snap.aggregate_rating is not None else collected_avg,
                "reviewCt": float(max(snap.review_count, len(inputs.reviews))),
                "ratingCt": float(snap.rating_count),
                "installLower": float(snap.installs_lower),
            }
        )
