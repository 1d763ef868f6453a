"""RankFraudEngine: top-level orchestrator of a full detection run."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import structlog

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.context import RunContext, create_run_context
from rankfraud.core.pipeline import Pipeline
from rankfraud.stages.extraction.stage import ExtractionStage
from rankfraud.stages.ingest.stage import IngestStage
from rankfraud.stages.reporting.stage import ReportingStage
from rankfraud.stages.review_filter.stage import ReviewFilterStage
from rankfraud.stages.training.stage import TrainingStage
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.storage.ingest import manifest_inputs
from rankfraud.storage.schema import provenance_payload

logger = structlog.get_logger()


class RankFraudEngine:
    def __init__(
        self,
        config: RankFraudConfig,
        manifest_path: str | Path,
        *,
        out_dir: str | Path | None = None,
        review_filter_path: str | Path | None = None,
        stop_after: str | None = None,
    ) -> None:
        self.config = config
        self.manifest_path = Path(manifest_path)
        self.review_filter_path = review_filter_path
        self.stop_after = stop_after
        self.ctx = create_run_context(config, manifest_path, review_filter_path=review_filter_path)
        base = Path(out_dir) if out_dir else Path(config.output_dir) / self.ctx.run_id
        protected = manifest_inputs(manifest_path)
        if review_filter_path:
            protected.append(Path(review_filter_path))
        self.storage = FileSystemStorage(base, protected=protected)
        self.pipeline = Pipeline()
        self._build_pipeline()

    def _build_pipeline(self) -> None:
        self.pipeline.add_stage(IngestStage(self.storage))
        self.pipeline.add_stage(ReviewFilterStage(self.storage))
        self.pipeline.add_stage(ExtractionStage(self.storage))
        self.pipeline.add_stage(TrainingStage(self.storage))
        self.pipeline.add_stage(ReportingStage(self.storage))

    def _provenance(self, status: str, errors: list[str] | None = None) -> dict[str, Any]:
        params: dict[str, Any] = {
            "manifest": str(self.manifest_path),
            "review_filter": self.review_filter_path,
            "stop_after": self.stop_after,
        }
        payload = provenance_payload("run", params, self.config)
        payload.update(run_id=self.ctx.run_id, status=status)
        if errors:
            payload["errors"] = errors
        return payload

    def run(self) -> RunContext:
        self.storage.create_dir()
        logger.info("engine.start", run_id=self.ctx.run_id, out=str(self.storage.base_dir))
        self.storage.save_json("provenance.json", self._provenance("running"))
        try:
            result = self.pipeline.run(self.ctx, stop_after=self.stop_after)
        except Exception:
            self.storage.save_json("provenance.json", self._provenance("failed", self.ctx.errors))
            raise
        self.storage.save_json("provenance.json", self._provenance("completed"))
        logger.info("engine.complete", run_id=self.ctx.run_id)
        return result
