"""Format version helpers for persisted artifacts."""

from __future__ import annotations

import hashlib
import importlib.metadata
import json
import platform
from typing import Any

from rankfraud.config.schema import RankFraudConfig

# Increment when persisted artifact contracts change.
FORMAT_VERSION = "1.0.0"

HEADER_PREFIX = "# rankfraud-format:"


def format_header(kind: str) -> str:
    """First line of every line-oriented output file."""
    return f"{HEADER_PREFIX} {FORMAT_VERSION} {kind}"


def parse_header(line: str) -> tuple[str, str] | None:
    """Return (version, kind) for a format header line, else None."""
    if not line.startswith(HEADER_PREFIX):
        return None
    parts = line[len(HEADER_PREFIX) :].split()
    if len(parts) != 2:
        return None
    return parts[0], parts[1]


def build_config_hash(config: RankFraudConfig) -> str:
    """Stable hash of the analysis-relevant config values for run comparability."""
    payload = _without_runtime(config.model_dump(mode="json"))
    encoded = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()


def _without_runtime(payload: dict[str, Any]) -> dict[str, Any]:
    # Parallelism, log verbosity and output location never change results.
    return {k: v for k, v in payload.items() if k not in ("jobs", "log_level", "output_dir")}


PROVENANCE_PACKAGES = ("rankfraud", "numpy", "scipy", "pandas", "networkx", "scikit-learn", "pydantic")


def package_versions() -> dict[str, str]:
    versions: dict[str, str] = {}
    for name in PROVENANCE_PACKAGES:
        try:
            versions[name] = importlib.metadata.version(name)
        except importlib.metadata.PackageNotFoundError:
            versions[name] = "unknown"
    versions["python"] = platform.python_version()
    return versions


def provenance_payload(command: str, params: dict[str, Any], config: RankFraudConfig) -> dict[str, Any]:
    """What produced a run directory: command, parameters, config, versions, seed.

    Carries no timestamps so identical runs write identical records.
    """
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "params": {k: _plain(v) for k, v in sorted(params.items())},
        "seed": config.seed,
        "config_hash": build_config_hash(config),
        "config": _without_runtime(config.model_dump(mode="json")),
        "versions": package_versions(),
    }


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)
