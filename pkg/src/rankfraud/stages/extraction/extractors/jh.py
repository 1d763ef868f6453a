"""Jekyll-Hyde features: permission counts and dangerous-permission ramps."""

from __future__ import annotations

from rankfraud.config.schema import RankFraudConfig
from rankfraud.permissions.ramps import ramp_analysis
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels


class JekyllHydeExtractor:
    name = "jh"

    def extract(self, inputs: AppInputs, models: FeatureModels, config: RankFraudConfig) -> ExtractorResult:
        if not inputs.snapshots:
            return ExtractorResult(
                values={"permCt": 0.0, "dangerCt": 0.0, "rampCt": 0.0, "dangerRamp": 0.0},
                flags=["no_snapshot"],
            )
        report = ramp_analysis(inputs.snapshots, models.catalog, config.jh.ramp_mode)
        flags = ["unknown_permissions"] if report.unknown_permissions else []
        return ExtractorResult(
            values={
                "permCt": float(report.perm_count),
                "dangerCt": float(report.danger_count),
                "rampCt": float(report.ramp_count),
                "dangerRamp": float(report.danger_added_total),
            },
            flags=flags,
        )
