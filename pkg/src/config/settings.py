"""Process-level configuration loaded from the environment."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Central configuration object loaded from the environment."""

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    config_dir: Path = Field(
        Path("data/config"),
        validation_alias="UIP_CONFIG_DIR",
        description="Directory holding the default ves.yaml",
    )
    log_level: str = Field("WARNING", validation_alias="UIP_LOG_LEVEL")
    metrics_port: int | None = Field(None, validation_alias="UIP_METRICS_PORT")
    default_seed: int = Field(42, validation_alias="UIP_DEFAULT_SEED")

    @property
    def ves_config_path(self) -> Path:
        return self.config_dir / "ves.yaml"


@lru_cache()
def get_settings() -> Settings:
    """Return a cached instance of the settings."""

    return Settings()
