"""Stage 1: Ingest: load and validate the dataset named by a manifest."""

from __future__ import annotations

import structlog

from rankfraud.core.context import RunContext
from rankfraud.core.pipeline import PipelineStage
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.storage.ingest import IngestReport, ingest_with_report
from rankfraud.utils.progress import console, stage_header

logger = structlog.get_logger()


def ingest_report_payload(report: IngestReport, summary: dict[str, int]) -> dict:
    return {
        "loaded": dict(sorted(report.loaded.items())),
        "store": summary,
        "rejected": [{"file": e.file, "line": e.line, "message": e.message} for e in report.rejected],
    }


class IngestStage(PipelineStage):
    name = "ingest"
    description = "Load market dataset"

    def __init__(self, storage: FileSystemStorage) -> None:
        self.storage = storage

    def execute(self, ctx: RunContext) -> RunContext:
        stage_header(self.name, self.description)
        store, report = ingest_with_report(ctx.manifest_path)
        summary = store.summary()
        self.storage.save_json("ingest_report.json", ingest_report_payload(report, summary))

        console.print(
            f"  [green]Loaded[/green] {summary['apps']} apps, {summary['reviews']} reviews, "
            f"{summary['reviewers']} reviewers, {summary['snapshots']} snapshots"
        )
        if report.rejected:
            console.print(f"  [yellow]{report.rejected_count} line(s) rejected[/yellow] (see ingest_report.json)")

        ctx.store = store
        ctx.ingest_report = report
        return ctx
