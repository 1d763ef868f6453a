"""Inter-review relation features: positive-review spikes and install ratios."""

from __future__ import annotations

from rankfraud.config.schema import RankFraudConfig
from rankfraud.irr.ratios import ratio_features
from rankfraud.irr.spikes import app_spikes
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels


class InterReviewExtractor:
    name = "irr"

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult:
        irr = config.irr
        reviews = inputs.genuine if irr.use_genuine_only else list(inputs.reviews)
        flags: list[str] = []

        spikes = app_spikes(
            reviews,
            positive_rating=irr.positive_rating,
            multiplier=irr.fence_multiplier,
            min_days=irr.min_days,
        )
        if spikes.insufficient_data:
            flags.append("spikes_insufficient_data")
        values = {"spikeDays": float(len(spikes.spike_days)), "maxSpikeAmp": float(spikes.max_amplitude)}

        if not inputs.snapshots:
            flags.append("no_snapshot")
            values.update(i1rt1=0.0, i2rt2=0.0, i1rv1=0.0, i2rv2=0.0)
        else:
            # The review-count bucket always comes from the genuine reviews.
            ratios = ratio_features(inputs.snapshots[-1], len(inputs.genuine), config.bucket_boundaries)
            values.update(ratios.model_dump())
        return ExtractorResult(values=values, flags=flags)
