"""Stage 5: Reporting: score every app and summarize the field run."""

from __future__ import annotations

import structlog

from rankfraud.core.context import RunContext
from rankfraud.core.errors import PipelineError
from rankfraud.core.pipeline import PipelineStage
from rankfraud.learn.models import predict
from rankfraud.stages.extraction.assemble import feature_frame
from rankfraud.stages.reporting.summaries import category_fraud_density, clique_summary, prediction_frame
from rankfraud.stages.training.stage import feature_matrix
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.types.features import APP_SCHEMA
from rankfraud.utils.progress import console, print_frame, stage_header

logger = structlog.get_logger()


class ReportingStage(PipelineStage):
    name = "reporting"
    description = "Score apps and write reports"

    def __init__(self, storage: FileSystemStorage) -> None:
        self.storage = storage

    def execute(self, ctx: RunContext) -> RunContext:
        stage_header(self.name, self.description)
        if ctx.store is None or ctx.app_model is None or not ctx.feature_rows:
            raise PipelineError("Trained app model and feature rows required", self.name)

        ids, x = feature_matrix(ctx.feature_rows)
        prediction = predict(ctx.app_model, x, schema_version=APP_SCHEMA, ids=ids)
        predictions = prediction_frame(prediction)
        self.storage.save_frame("predictions.tsv", "predictions", predictions)

        density = category_fraud_density(predictions, ctx.store)
        self.storage.save_frame("category_density.tsv", "category-density", density)
        cliques = clique_summary(feature_frame(ctx.feature_rows))
        self.storage.save_json("clique_summary.json", cliques)

        flagged = int(predictions["label"].sum())
        share = 100.0 * flagged / len(predictions) if len(predictions) else 0.0
        console.print(f"  [green]Flagged[/green] {flagged} of {len(predictions)} apps ({share:.1f}%)")
        print_frame(density, "Fraud density by category")

        ctx.prediction = prediction
        return ctx
