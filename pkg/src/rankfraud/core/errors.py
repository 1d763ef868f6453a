"""Error hierarchy for rankfraud."""

from __future__ import annotations

from dataclasses import dataclass


class RankFraudError(Exception):
    """Base error for all rankfraud errors."""

    code: str = "RANKFRAUD_ERROR"

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


class ConfigError(RankFraudError):
    code = "CONFIG_ERROR"


class ValidationError(RankFraudError):
    code = "VALIDATION_ERROR"


@dataclass(frozen=True)
class RecordError:
    """One rejected input line."""

    file: str
    line: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.message}"


class IngestError(RankFraudError):
    code = "INGEST_ERROR"

    def __init__(self, message: str, records: list[RecordError] | None = None) -> None:
        self.records = records or []
        super().__init__(message)


class DanglingReferenceError(IngestError):
    code = "DANGLING_REFERENCE"

    def __init__(self, offenders: list[str]) -> None:
        self.offenders = offenders
        shown = ", ".join(offenders[:20])
        more = f" (+{len(offenders) - 20} more)" if len(offenders) > 20 else ""
        super().__init__(f"{len(offenders)} unresolved reference(s): {shown}{more}")


class NotFoundError(RankFraudError):
    code = "NOT_FOUND"

    def __init__(self, kind: str, key: str) -> None:
        self.kind = kind
        self.key = key
        super().__init__(f"Unknown {kind}: {key}")


class ModelError(RankFraudError):
    code = "MODEL_ERROR"


class SchemaMismatchError(ModelError):
    code = "SCHEMA_MISMATCH"

    def __init__(self, expected: str, actual: str) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Feature schema mismatch: model expects '{expected}', got '{actual}'")


class PipelineError(RankFraudError):
    code = "PIPELINE_ERROR"

    def __init__(self, message: str, stage: str) -> None:
        self.stage = stage
        super().__init__(f"[{stage}] {message}")
