"""Config loader: merges defaults < env < file < CLI overrides."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.errors import ConfigError


class EnvOverrides(BaseSettings):
    """Environment knobs, read as RANKFRAUD_<NAME>."""

    model_config = SettingsConfigDict(env_prefix="RANKFRAUD_", extra="ignore")

    output_dir: str | None = None
    jobs: int | None = None
    seed: int | None = None
    log_level: str | None = None
    pcf_theta: float | None = None
    app_learner: str | None = None

    def as_config_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key in ("output_dir", "jobs", "seed", "log_level"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.pcf_theta is not None:
            out["pcf"] = {"theta": self.pcf_theta}
        if self.app_learner is not None:
            out["learn"] = {"app_learner": self.app_learner}
        return out


def load_config(
    config_path: str | Path | None = None,
    overrides: dict | None = None,
) -> RankFraudConfig:
    load_dotenv()

    config_data: dict[str, Any] = RankFraudConfig().model_dump()
    _deep_merge(config_data, EnvOverrides().as_config_dict())

    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
        try:
            file_data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(file_data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
        _deep_merge(config_data, file_data)

    if overrides:
        _deep_merge(config_data, overrides)

    try:
        return RankFraudConfig(**config_data)
    except PydanticValidationError as exc:
        raise ConfigError(f"Invalid configuration: {exc}") from exc


def _deep_merge(base: dict, override: dict) -> dict:
    for key, value in override.items():
        if key in base and isinstance(base[key], dict) and isinstance(value, dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value
    return base
