"""File-based storage for run outputs."""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import pandas as pd
import structlog

from rankfraud.core.errors import ValidationError
from rankfraud.storage.schema import FORMAT_VERSION, format_header

logger = structlog.get_logger()


class FileSystemStorage:
    """Writes every artifact of one run under ``base_dir``.

    JSON objects gain a top-level ``format_version``; line files start with
    a format header. Paths listed in ``protected`` (the run's inputs) are never written to.
    """

    def __init__(self, base_dir: str | Path, protected: Iterable[str | Path] = ()) -> None:
        self.base_dir = Path(base_dir)
        self._protected = {Path(p).resolve() for p in protected}

    def create_dir(self) -> Path:
        self.base_dir.mkdir(parents=True, exist_ok=True)
        return self.base_dir

    def path(self, filename: str) -> Path:
        target = self.base_dir / filename
        if target.resolve() in self._protected:
            raise ValidationError(f"Refusing to overwrite input file {target}")
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def save_json(self, filename: str, data: Any) -> Path:
        path = self.path(filename)
        if hasattr(data, "model_dump"):
            data = data.model_dump(mode="json")
        if isinstance(data, dict) and "format_version" not in data:
            data = {"format_version": FORMAT_VERSION, **data}
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(data, f, indent=2, sort_keys=True, default=str)
            f.write("\n")
        logger.debug("storage.saved", path=str(path))
        return path

    def load_json(self, filename: str) -> Any:
        path = self.base_dir / filename
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as f:
            return json.load(f)

    def save_text(self, filename: str, text: str) -> Path:
        path = self.path(filename)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.debug("storage.saved", path=str(path))
        return path

    def save_lines(self, filename: str, kind: str, lines: Iterable[str]) -> Path:
        body = "".join(f"{line}\n" for line in lines)
        return self.save_text(filename, f"{format_header(kind)}\n{body}")

    def save_records(self, filename: str, kind: str, rows: Iterable[dict[str, Any]]) -> Path:
        return self.save_lines(
            filename, kind, (json.dumps(r, sort_keys=True, ensure_ascii=False, separators=(",", ":")) for r in rows)
        )

    def save_frame(self, filename: str, kind: str, frame: pd.DataFrame, *, index: bool = False) -> Path:
        path = self.path(filename)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(format_header(kind) + "\n")
            frame.to_csv(f, sep="\t", index=index, lineterminator="\n", float_format="%.10g")
        logger.debug("storage.saved", path=str(path))
        return path


def read_frame(path: str | Path) -> pd.DataFrame:
    """Read a TSV written by :meth:`FileSystemStorage.save_frame`."""
    return pd.read_csv(path, sep="\t", comment=None, skiprows=1, dtype={"app_id": str})
