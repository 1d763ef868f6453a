"""RunContext: state carrier through the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from rankfraud.config.schema import RankFraudConfig
from rankfraud.review.filter import ReviewFilter
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.ingest import IngestReport
from rankfraud.storage.schema import build_config_hash
from rankfraud.types.evaluation import EvalReport
from rankfraud.types.features import AppFeatureRow
from rankfraud.types.model import Prediction, TrainedModel


@dataclass
class RunContext:
    run_id: str
    config: RankFraudConfig
    manifest_path: Path
    status: Literal["pending", "running", "completed", "failed"] = "pending"
    # Reuse a trained review filter instead of training one.
    review_filter_path: Path | None = None
    store: DatasetStore | None = None
    ingest_report: IngestReport | None = None
    review_filter: ReviewFilter | None = None
    feature_rows: list[AppFeatureRow] = field(default_factory=list)
    eval_reports: list[EvalReport] = field(default_factory=list)
    app_model: TrainedModel | None = None
    prediction: Prediction | None = None
    errors: list[str] = field(default_factory=list)


def create_run_context(
    config: RankFraudConfig,
    manifest_path: str | Path,
    *,
    review_filter_path: str | Path | None = None,
) -> RunContext:
    # Same config and seed give the same run id, so re-runs land in the same place.
    run_id = f"run-{config.seed}-{build_config_hash(config)[:10]}"
    return RunContext(
        run_id=run_id,
        config=config,
        manifest_path=Path(manifest_path),
        review_filter_path=Path(review_filter_path) if review_filter_path else None,
    )
