"""Ingestion of line-oriented record files listed in a manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TypeVar

import structlog
from pydantic import BaseModel, ConfigDict
from pydantic import ValidationError as PydanticValidationError

from rankfraud.config.schema import AssetPaths
from rankfraud.core.errors import IngestError, RecordError
from rankfraud.storage.dataset import DatasetStore
from rankfraud.types.market import AppRecord, AppSnapshot, LabelRecord, LabelSet, Review, ReviewerProfile

logger = structlog.get_logger()

RecordT = TypeVar("RecordT", bound=BaseModel)

ASSET_KEYS = ("permission_catalog", "malware_lexicon", "fraud_lexicon", "benign_lexicon", "coercive_keywords", "sentiment_corpus")


class IngestionManifest(BaseModel):
    """Paths of the five record files plus optional asset overrides.

    Relative paths resolve against the manifest's directory.
    """

    model_config = ConfigDict(extra="forbid")

    format_version: str | None = None
    apps: str
    reviews: str
    snapshots: str | None = None
    reviewers: str | None = None
    labels: str | None = None
    permission_catalog: str | None = None
    malware_lexicon: str | None = None
    fraud_lexicon: str | None = None
    benign_lexicon: str | None = None
    coercive_keywords: str | None = None
    sentiment_corpus: str | None = None


@dataclass
class IngestReport:
    loaded: dict[str, int] = field(default_factory=dict)
    rejected: list[RecordError] = field(default_factory=list)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)


def load_manifest(manifest_path: str | Path) -> tuple[IngestionManifest, Path]:
    path = Path(manifest_path)
    if not path.exists():
        raise IngestError(f"Manifest not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        manifest = IngestionManifest(**data)
    except (json.JSONDecodeError, PydanticValidationError, TypeError) as exc:
        raise IngestError(f"Invalid manifest {path}: {exc}") from exc
    return manifest, path.parent


def ingest(manifest_path: str | Path) -> DatasetStore:
    """Load and validate a dataset; rejected lines are logged and skipped."""
    store, _ = ingest_with_report(manifest_path)
    return store


def ingest_with_report(manifest_path: str | Path) -> tuple[DatasetStore, IngestReport]:
    manifest, base = load_manifest(manifest_path)
    report = IngestReport()

    def resolve(rel: str | None) -> Path | None:
        if rel is None:
            return None
        p = Path(rel)
        return p if p.is_absolute() else base / p

    apps = _read_records(resolve(manifest.apps), AppRecord, report, "apps", key="app_id")
    snapshots = _read_records(resolve(manifest.snapshots), AppSnapshot, report, "snapshots")
    reviews = _read_records(resolve(manifest.reviews), Review, report, "reviews", key="review_id")
    profiles = _read_records(resolve(manifest.reviewers), ReviewerProfile, report, "reviewers", key="reviewer_id")
    label_records = _read_records(resolve(manifest.labels), LabelRecord, report, "labels")

    labels = _collect_labels(label_records, report, str(resolve(manifest.labels) or "labels"))

    asset_paths: dict[str, str] = {}
    for key in ASSET_KEYS:
        resolved = resolve(getattr(manifest, key))
        if resolved is not None:
            if not resolved.exists():
                raise IngestError(f"Manifest asset '{key}' not found: {resolved}")
            asset_paths[key] = str(resolved)

    store = DatasetStore.build(
        apps=[r for _, r in apps],
        snapshots=[r for _, r in snapshots],
        reviews=[r for _, r in reviews],
        profiles=[r for _, r in profiles],
        labels=labels,
        asset_paths=asset_paths,
    )
    logger.info("ingest.loaded", rejected=report.rejected_count, **report.loaded)
    return store, report


def _read_records(
    path: Path | None,
    model: type[RecordT],
    report: IngestReport,
    kind: str,
    *,
    key: str | None = None,
) -> list[tuple[int, RecordT]]:
    if path is None:
        report.loaded[kind] = 0
        return []
    if not path.exists():
        raise IngestError(f"Record file not found: {path}")

    out: list[tuple[int, RecordT]] = []
    seen: set[str] = set()
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, 1):
            try:
                line = raw.decode("utf-8").strip()
            except UnicodeDecodeError:
                _reject(report, path, lineno, "invalid UTF-8")
                continue
            if not line or line.startswith("#"):
                continue
            try:
                record = model(**json.loads(line))
            except json.JSONDecodeError as exc:
                _reject(report, path, lineno, f"malformed JSON: {exc.msg}")
                continue
            except (PydanticValidationError, TypeError) as exc:
                _reject(report, path, lineno, _first_error(exc))
                continue
            if key is not None:
                ident = getattr(record, key)
                if ident in seen:
                    _reject(report, path, lineno, f"duplicate {key} '{ident}'")
                    continue
                seen.add(ident)
            out.append((lineno, record))
    report.loaded[kind] = len(out)
    return out


def _collect_labels(records: list[tuple[int, LabelRecord]], report: IngestReport, file: str) -> LabelSet:
    apps: dict[str, str] = {}
    reviews: dict[str, str] = {}
    for lineno, rec in records:
        target, ident = (apps, rec.app_id) if rec.app_id is not None else (reviews, rec.review_id)
        assert ident is not None
        if ident in target:
            report.rejected.append(RecordError(file, lineno, f"second label for '{ident}'"))
            logger.warning("ingest.record_rejected", file=file, line=lineno, reason="duplicate label")
            continue
        target[ident] = rec.label
    return LabelSet(apps=apps, reviews=reviews)  # type: ignore[arg-type]


def _reject(report: IngestReport, path: Path, lineno: int, message: str) -> None:
    report.rejected.append(RecordError(str(path), lineno, message))
    logger.warning("ingest.record_rejected", file=str(path), line=lineno, reason=message)


def _first_error(exc: Exception) -> str:
    if isinstance(exc, PydanticValidationError):
        err = exc.errors()[0]
        loc = ".".join(str(p) for p in err.get("loc", ()))
        return f"{loc}: {err.get('msg', 'invalid')}" if loc else str(err.get("msg", "invalid"))
    return str(exc)


def resolve_asset(key: str, overrides: AssetPaths, store: DatasetStore | None = None) -> Path | None:
    """Asset path by precedence: config override, then the dataset manifest; None means the bundled default."""
    if key not in ASSET_KEYS:
        raise KeyError(key)
    override = getattr(overrides, key)
    if override:
        return Path(override)
    if store is not None and key in store.asset_paths:
        return Path(store.asset_paths[key])
    return None


def manifest_inputs(manifest_path: str | Path) -> list[Path]:
    """The manifest and every file it names; run outputs may never replace these."""
    manifest, base = load_manifest(manifest_path)
    named = manifest.model_dump(exclude={"format_version"}, exclude_none=True).values()
    return [Path(manifest_path), *(Path(rel) if Path(rel).is_absolute() else base / rel for rel in named)]
