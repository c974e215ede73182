from typing import Dict, Any, List, Optional
import hashlib
import json
import logging
import os
from pathlib import Path

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.error_handler import ConfigurationError, UnsupportedDimensionError
from .config_validator import ConfigValidator, STAGES

JOBS_ENVIRONMENT_VARIABLE = "GRID2X_JOBS"


class PipelineConfig(BaseModel):
    """Settings of one pipeline run."""

    dimension: int = 2
    max_dimension: int = 3
    stages: List[str] = Field(default_factory=lambda: list(STAGES))
    jobs: int = 1
    checkpoint_directory: str = "checkpoints"
    output_directory: str = "catalogs"
    radius: int = 4
    radius_cap: int = 8
    growth_radii: int = 10
    match_limit: int = 64
    stage_budget_seconds: Optional[float] = None
    log_level: str = "INFO"
    log_directory: str = "logs"

    @field_validator("jobs")
    @classmethod
    def _positive_jobs(cls, value: int) -> int:
        if value < 1:
            raise ValueError("jobs must be at least 1")
        return value

    @field_validator("stages")
    @classmethod
    def _known_stages(cls, value: List[str]) -> List[str]:
        errors = ConfigValidator().validate_stages(value)
        if errors:
            raise ValueError("; ".join(errors))
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "PipelineConfig":
        if not 1 <= self.dimension <= self.max_dimension:
            raise UnsupportedDimensionError(
                f"dimension {self.dimension} outside 1..{self.max_dimension}")
        if self.radius > self.radius_cap:
            raise ValueError(f"radius {self.radius} exceeds radius cap {self.radius_cap}")
        return self

    def digest(self) -> str:
        """Hash of the settings that influence catalog contents."""
        relevant = {
            "dimension": self.dimension,
            "radius": self.radius,
            "radius_cap": self.radius_cap,
            "growth_radii": self.growth_radii,
        }
        canonical = json.dumps(relevant, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


class SystemConfig:
    """Loads config/pipeline.yaml and builds a PipelineConfig from it."""

    def __init__(self, config_dir: str = "config"):
        self.logger = logging.getLogger(__name__)
        self.config_dir = Path(config_dir)
        self.validator = ConfigValidator()
        self.pipeline_config = self._load_and_validate_config("pipeline")

    def _load_and_validate_config(self, config_name: str) -> Dict[str, Any]:
        """Load and validate configuration from YAML file."""
        config = self._load_config(config_name)
        if not config:
            return {}

        errors = self.validator.validate_config(config_name, config)
        if errors:
            for error in errors:
                self.logger.error(f"Configuration error in {config_name}: {error}")
            raise ConfigurationError(f"Invalid configuration in {config_name}: {errors[0]}")

        return config

    def _load_config(self, config_name: str) -> Dict[str, Any]:
        config_path = self.config_dir / f"{config_name}.yaml"
        if config_path.exists():
            with open(config_path, 'r') as f:
                return yaml.safe_load(f) or {}
        self.logger.debug(f"No {config_path}, using built-in defaults")
        return {}

    def build(self, **overrides: Any) -> PipelineConfig:
        """File values, then GRID2X_JOBS, then explicit overrides (None skipped)."""
        raw = self.pipeline_config
        values: Dict[str, Any] = {}
        values.update(raw.get("pipeline", {}))
        values.update(raw.get("search", {}))
        values.update(raw.get("runtime", {}))
        values.update(raw.get("logging", {}))
        if "log_level" not in values and "level" in values:
            values["log_level"] = values.pop("level")

        env_jobs = os.environ.get(JOBS_ENVIRONMENT_VARIABLE)
        if env_jobs:
            try:
                values["jobs"] = int(env_jobs)
            except ValueError:
                raise ConfigurationError(f"{JOBS_ENVIRONMENT_VARIABLE}={env_jobs!r} is not an integer")

        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return PipelineConfig(**values)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e


def load_pipeline_config(config_dir: str = "config", **overrides: Any) -> PipelineConfig:
    return SystemConfig(config_dir).build(**overrides)
