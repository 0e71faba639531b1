"""Fixture file access: YAML documents in, atomically replaced text files out."""
from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import yaml

from src.core.errors import ScenarioError

LOGGER = logging.getLogger(__name__)


def read_yaml(path: Path) -> Any:
    """Parse ``path`` as YAML; missing or malformed files raise ``ScenarioError``."""
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ScenarioError("E_NOT_FOUND", f"{path} does not exist", details={"path": str(path)}) from exc
    except IsADirectoryError as exc:
        raise ScenarioError("E_NOT_FOUND", f"{path} is a directory", details={"path": str(path)}) from exc
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError("E_SCENARIO_INVALID", f"{path} is not valid YAML", details={"path": str(path)}) from exc


def read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (FileNotFoundError, IsADirectoryError) as exc:
        raise ScenarioError("E_NOT_FOUND", f"{path} does not exist", details={"path": str(path)}) from exc


def write_atomic(path: Path, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as stream:
            stream.write(text)
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise
    LOGGER.debug("wrote %s", path)
    return path


__all__ = ["read_text", "read_yaml", "write_atomic"]
