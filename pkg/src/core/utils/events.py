"""Single-line JSON domain events."""
from __future__ import annotations

import json
import logging
from typing import Any


def log_event(logger: logging.Logger, event: str, *, level: int = logging.INFO, **fields: Any) -> None:
    """Emit ``event`` as one JSON line; ``sid`` acts as the correlation id."""

    if not logger.isEnabledFor(level):
        return
    payload: dict[str, Any] = {"event": event}
    for key, value in fields.items():
        payload[key] = value
    logger.log(level, json.dumps(payload, ensure_ascii=False, sort_keys=True, default=str))
