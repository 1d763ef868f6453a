"""Per-app feature assembly: runs every extractor and joins their outputs."""

from __future__ import annotations

import math
import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.errors import SchemaMismatchError
from rankfraud.review.filter import filter_fraud_reviews
from rankfraud.stages.extraction.extractors.base import AppInputs, FeatureExtractor, FeatureModels
from rankfraud.stages.extraction.extractors.coreg import CoReviewExtractor
from rankfraud.stages.extraction.extractors.feedback import FeedbackExtractor
from rankfraud.stages.extraction.extractors.general import GeneralExtractor
from rankfraud.stages.extraction.extractors.irr import InterReviewExtractor
from rankfraud.stages.extraction.extractors.jh import JekyllHydeExtractor
from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.filesystem import read_frame
from rankfraud.types.features import APP_FEATURE_NAMES, AppFeatureRow, AppFeatures

logger = structlog.get_logger()

EXTRACTOR_MAP: dict[str, type[FeatureExtractor]] = {
    "coreg": CoReviewExtractor,
    "feedback": FeedbackExtractor,
    "irr": InterReviewExtractor,
    "jh": JekyllHydeExtractor,
    "general": GeneralExtractor,
}


def resolve_jobs(jobs: int) -> int:
    return jobs if jobs > 0 else (os.cpu_count() or 1)


def app_inputs(store: DatasetStore, app_id: str, models: FeatureModels) -> AppInputs:
    reviews = store.reviews_of(app_id)
    genuine, fraudulent = [], []
    if reviews:
        partition = filter_fraud_reviews(store, app_id, models.review_filter)
        genuine, fraudulent = partition.genuine, partition.fraudulent
    return AppInputs(
        store=store,
        app_id=app_id,
        reviews=reviews,
        snapshots=store.snapshots_of(app_id),
        genuine=genuine,
        fraudulent=fraudulent,
    )


def assemble(store: DatasetStore, app_id: str, models: FeatureModels, config: RankFraudConfig) -> AppFeatureRow:
    """Build the canonical feature vector of one app.

    Raises NotFoundError for an unknown app. Degenerate inputs (no reviews,
    no snapshots, no cliques) yield zero features and a flag naming the cause.
    """
    inputs = app_inputs(store, app_id, models)
    values: dict[str, float] = {}
    flags: list[str] = []
    for name, cls in EXTRACTOR_MAP.items():
        result = cls().extract(inputs, models, config)
        values.update(result.values)
        flags.extend(f"{name}:{flag}" for flag in result.flags)

    for key, value in values.items():
        if not math.isfinite(value):
            # Non-finite values become 0 and are flagged.
            values[key] = 0.0
            flags.append(f"nonfinite:{key}")

    return AppFeatureRow(app_id=app_id, features=AppFeatures.model_validate(values), flags=sorted(set(flags)))


_worker_state: tuple[DatasetStore, FeatureModels, RankFraudConfig] | None = None


def _init_worker(store: DatasetStore, models: FeatureModels, config: RankFraudConfig) -> None:
    global _worker_state
    _worker_state = (store, models, config)


def _assemble_in_worker(app_id: str) -> AppFeatureRow:
    assert _worker_state is not None
    store, models, config = _worker_state
    return assemble(store, app_id, models, config)


def assemble_all(
    store: DatasetStore,
    app_ids: Sequence[str],
    models: FeatureModels,
    config: RankFraudConfig,
    *,
    jobs: int | None = None,
) -> list[AppFeatureRow]:
    """Assemble many apps, in parallel when ``jobs`` > 1; rows come back in sorted app-id order."""
    ordered = sorted(set(app_ids))
    workers = min(resolve_jobs(config.jobs if jobs is None else jobs), max(len(ordered), 1))
    logger.info("features.assemble_started", apps=len(ordered), jobs=workers)

    if workers <= 1:
        rows = [assemble(store, app_id, models, config) for app_id in ordered]
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(store, models, config)
        ) as pool:
            rows = list(pool.map(_assemble_in_worker, ordered, chunksize=max(1, len(ordered) // (workers * 4))))

    flagged = sum(1 for r in rows if r.flags)
    logger.info("features.assemble_completed", apps=len(rows), flagged=flagged)
    return rows


def feature_frame(rows: Sequence[AppFeatureRow]) -> pd.DataFrame:
    """One row per app: app_id followed by the canonical features in fixed order."""
    data = [[row.app_id, *row.features.vector()] for row in rows]
    return pd.DataFrame(data, columns=["app_id", *APP_FEATURE_NAMES])


def load_feature_matrix(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a feature matrix TSV back as (app_ids, matrix), checking the column contract."""
    frame = read_frame(path)
    columns = list(frame.columns)
    if columns != ["app_id", *APP_FEATURE_NAMES]:
        raise SchemaMismatchError(",".join(APP_FEATURE_NAMES), ",".join(columns[1:]))
    return frame["app_id"].astype(str).tolist(), frame[APP_FEATURE_NAMES].to_numpy(dtype=float)
