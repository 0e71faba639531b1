from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml

from src.harness import Scenario, load_scenario, parse_scenario

from ..conftest import FIXTURES

OPTION = FIXTURES / "option"
OPTION_SCENARIOS = OPTION / "scenarios"
ALL_SCENARIOS = sorted(FIXTURES.glob("*/scenarios/*.yaml"))


def option_scenario(name: str) -> Scenario:
    return load_scenario(OPTION_SCENARIOS / f"{name}.yaml")


def raw_option(name: str = "honest") -> dict[str, Any]:
    """The YAML mapping of an option scenario, for tests that edit it before parsing."""
    data = yaml.safe_load((OPTION_SCENARIOS / f"{name}.yaml").read_text(encoding="utf-8"))
    assert isinstance(data, dict)
    return data


def parse_option(data: dict[str, Any]) -> Scenario:
    return parse_scenario(data, base_dir=OPTION_SCENARIOS)


def scenario_id(path: Path) -> str:
    return f"{path.parent.parent.name}/{path.stem}"
