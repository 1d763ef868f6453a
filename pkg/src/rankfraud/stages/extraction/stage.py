"""Stage 3: Extraction: assemble the per-app feature matrix."""

from __future__ import annotations

from pathlib import Path

import structlog

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.context import RunContext
from rankfraud.core.errors import PipelineError
from rankfraud.core.pipeline import PipelineStage
from rankfraud.permissions.catalog import load_catalog
from rankfraud.review.filter import ReviewFilter
from rankfraud.review.lexicons import load_lexicons
from rankfraud.stages.extraction.assemble import assemble_all, feature_frame
from rankfraud.stages.extraction.extractors.base import FeatureModels
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.storage.ingest import resolve_asset
from rankfraud.types.features import AppFeatureRow
from rankfraud.utils.progress import console, stage_header

logger = structlog.get_logger()


def load_feature_models(config: RankFraudConfig, store: DatasetStore, review_filter: ReviewFilter) -> FeatureModels:
    def asset(key: str) -> Path | None:
        return resolve_asset(key, config.assets, store)

    return FeatureModels(
        review_filter=review_filter,
        lexicons=load_lexicons(asset("malware_lexicon"), asset("fraud_lexicon"), asset("benign_lexicon")),
        catalog=load_catalog(asset("permission_catalog")),
    )


def save_features(storage: FileSystemStorage, rows: list[AppFeatureRow]) -> None:
    storage.save_frame("features.tsv", "app-features", feature_frame(rows))
    storage.save_records("feature_flags.jsonl", "feature-flags", ({"app_id": r.app_id, "flags": r.flags} for r in rows if r.flags))


class ExtractionStage(PipelineStage):
    name = "extraction"
    description = "Extract app features"

    def __init__(self, storage: FileSystemStorage) -> None:
        self.storage = storage

    def execute(self, ctx: RunContext) -> RunContext:
        stage_header(self.name, self.description)
        if ctx.store is None or ctx.review_filter is None:
            raise PipelineError("Dataset and review filter required", self.name)

        models = load_feature_models(ctx.config, ctx.store, ctx.review_filter)
        rows = assemble_all(ctx.store, list(ctx.store.apps), models, ctx.config)
        save_features(self.storage, rows)

        flagged = sum(1 for r in rows if r.flags)
        console.print(f"  [green]Assembled[/green] {len(rows)} feature vectors ({flagged} with degeneracy flags)")
        ctx.feature_rows = rows
        return ctx
