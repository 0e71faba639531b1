from __future__ import annotations

from pathlib import Path

import pytest

from src.domain.hsl import ContractInterface, HslProgram, load_interfaces, parse_hsl


@pytest.fixture()
def option_dir(fixtures_dir: Path) -> Path:
    return fixtures_dir / "option"


@pytest.fixture()
def option_source(option_dir: Path) -> str:
    return (option_dir / "option.hsl").read_text(encoding="utf-8")


@pytest.fixture()
def option_program(option_source: str) -> HslProgram:
    return parse_hsl(option_source)


@pytest.fixture()
def option_interfaces(option_dir: Path, option_program: HslProgram) -> list[ContractInterface]:
    return load_interfaces(option_dir, option_program.import_files)
