"""Export a DatasetStore back to ingestion files plus a manifest."""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import structlog

from rankfraud.storage.dataset import DatasetStore
from rankfraud.storage.schema import FORMAT_VERSION, format_header

logger = structlog.get_logger()

RECORD_FILES = {
    "apps": "apps.jsonl",
    "snapshots": "snapshots.jsonl",
    "reviews": "reviews.jsonl",
    "reviewers": "reviewers.jsonl",
    "labels": "labels.jsonl",
}
MANIFEST_NAME = "manifest.json"


def export_store(store: DatasetStore, directory: str | Path, *, include_assets: bool = True) -> Path:
    """Write the store in canonical order; returns the manifest path."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)

    _write_lines(out / RECORD_FILES["apps"], "apps", (a.model_dump(mode="json") for a in store.apps.values()))
    _write_lines(
        out / RECORD_FILES["snapshots"],
        "snapshots",
        (s.model_dump(mode="json") for snaps in store.snapshots.values() for s in snaps),
    )
    _write_lines(out / RECORD_FILES["reviews"], "reviews", (r.model_dump(mode="json") for r in store.reviews.values()))
    # Imputed profiles are re-derived on ingestion.
    _write_lines(
        out / RECORD_FILES["reviewers"],
        "reviewers",
        (p.model_dump(mode="json", exclude={"imputed"}) for p in store.profiles.values() if not p.imputed),
    )
    label_rows: list[dict[str, Any]] = [{"app_id": a, "label": lab} for a, lab in sorted(store.labels.apps.items())]
    label_rows += [{"review_id": r, "label": lab} for r, lab in sorted(store.labels.reviews.items())]
    _write_lines(out / RECORD_FILES["labels"], "labels", label_rows)

    manifest: dict[str, Any] = {"format_version": FORMAT_VERSION, **RECORD_FILES}
    if include_assets:
        manifest.update(sorted(store.asset_paths.items()))
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    logger.info("export.written", directory=str(out), **store.summary())
    return manifest_path


def _write_lines(path: Path, kind: str, rows: Iterable[dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_header(kind) + "\n")
        for row in rows:
            f.write(json.dumps(row, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n")
