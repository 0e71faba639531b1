"""Logging configuration helpers."""

from __future__ import annotations

import logging
import logging.config
from typing import Any, Dict

from .settings import get_settings


LOGGING_CONFIG: Dict[str, Any] = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        # domain events are already JSON; keep the line machine-parsable
        "event": {"format": "%(message)s"},
        "standard": {"format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "event",
            "level": "DEBUG",
            "stream": "ext://sys.stderr",
        }
    },
    "loggers": {
        "src": {"level": "INFO", "propagate": True},
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}


def configure_logging(level: str | None = None) -> None:
    """Configure logging using the default configuration and settings."""

    settings = get_settings()
    logging.config.dictConfig(LOGGING_CONFIG)
    chosen = (level or settings.log_level).upper()
    logging.getLogger().setLevel(chosen)
    logging.getLogger("src").setLevel(chosen)
