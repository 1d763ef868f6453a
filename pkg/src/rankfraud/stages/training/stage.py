"""Stage 4: Training: cross-validate and fit the app classifier."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import structlog

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.context import RunContext
from rankfraud.core.errors import PipelineError
from rankfraud.core.pipeline import PipelineStage
from rankfraud.learn.experiments import Task, task_rows, transfer_rate
from rankfraud.learn.models import save_model, train
from rankfraud.learn.validation import cross_validate
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.types.evaluation import EvalReport
from rankfraud.types.features import APP_FEATURE_NAMES, APP_SCHEMA, AppFeatureRow
from rankfraud.types.market import LabelSet
from rankfraud.utils.progress import console, format_eval_table, print_eval_table, stage_header

logger = structlog.get_logger()


def feature_matrix(rows: Sequence[AppFeatureRow]) -> tuple[list[str], np.ndarray]:
    ids = [r.app_id for r in rows]
    x = np.asarray([r.features.vector() for r in rows], dtype=float).reshape(len(rows), len(APP_FEATURE_NAMES))
    return ids, x


def evaluate_task(
    ids: list[str],
    x: np.ndarray,
    labels: LabelSet,
    task: Task,
    config: RankFraudConfig,
) -> EvalReport | None:
    """k-fold report for one app task; None when the labeled set cannot be split into two folds."""
    _, tx, ty = task_rows(ids, x, labels, task)
    minority = int(np.bincount(ty, minlength=2).min()) if len(ty) else 0
    k = min(config.learn.folds, minority)
    if k < 2:
        logger.warning("training.task_skipped", task=task, rows=len(ty), minority=minority)
        return None
    if k < config.learn.folds:
        logger.warning("training.folds_reduced", task=task, requested=config.learn.folds, used=k)
    return cross_validate(
        tx,
        ty,
        config.learn.app_learner,
        k=k,
        seed=config.seed,
        config=config.learn,
        task=task,
        feature_names=APP_FEATURE_NAMES,
    )


class TrainingStage(PipelineStage):
    name = "training"
    description = "Train app classifier"

    def __init__(self, storage: FileSystemStorage) -> None:
        self.storage = storage

    def execute(self, ctx: RunContext) -> RunContext:
        stage_header(self.name, self.description)
        if ctx.store is None or not ctx.feature_rows:
            raise PipelineError("Feature rows required", self.name)

        config = ctx.config
        labels = ctx.store.labels
        ids, x = feature_matrix(ctx.feature_rows)

        reports = [r for task in ("fraud", "malware") if (r := evaluate_task(ids, x, labels, task, config)) is not None]
        if reports:
            self.storage.save_json("eval_reports.json", {"reports": [r.model_dump(mode="json") for r in reports]})
            self.storage.save_lines("eval_table.txt", "eval-table", format_eval_table(reports).splitlines())
            print_eval_table(reports)

        _, fx, fy = task_rows(ids, x, labels, "fraud")
        if len(set(fy.tolist())) < 2:
            raise PipelineError("Need labeled fraudulent and benign apps to train the app classifier", self.name)
        model = train(
            fx,
            fy,
            config.learn.app_learner,
            seed=config.seed,
            config=config.learn,
            feature_names=APP_FEATURE_NAMES,
            schema_version=APP_SCHEMA,
        )
        save_model(model, self.storage.path("app_model.json"))
        console.print(f"  [green]Trained[/green] {model.learner} app classifier on {len(fy)} apps")

        malware = [i for i, a in enumerate(ids) if labels.apps.get(a) == "malware"]
        if malware:
            result = transfer_rate(fx, fy, x[malware], config.learn.app_learner, seed=config.seed, config=config.learn)
            self.storage.save_json("transfer.json", {**result.model_dump(), "percent_flagged": result.percent_flagged})
            console.print(f"  Malware apps flagged as fraudulent: [bold]{result.percent_flagged:.2f}%[/bold]")

        ctx.eval_reports = reports
        ctx.app_model = model
        return ctx
