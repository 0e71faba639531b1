"""Scenario harness: build a world, run it to settlement and judge the outcome."""
from __future__ import annotations

from .matrix import STALLS, MatrixCell, MatrixReport, blamed, derive, fault_matrix
from .report import PartyLedger, RunReport, check_expectations
from .runner import build_report, resolve_seed, run, write_report
from .scenario import (
    ClockSettings,
    Expectation,
    PreparedScenario,
    Scenario,
    compile_file,
    critical_path_blocks,
    load_scenario,
    parse_scenario,
    prepare,
)
from .world import IscActor, World

__all__ = [
    "ClockSettings",
    "Expectation",
    "IscActor",
    "MatrixCell",
    "MatrixReport",
    "PartyLedger",
    "PreparedScenario",
    "RunReport",
    "STALLS",
    "Scenario",
    "World",
    "blamed",
    "build_report",
    "check_expectations",
    "compile_file",
    "critical_path_blocks",
    "derive",
    "fault_matrix",
    "load_scenario",
    "parse_scenario",
    "prepare",
    "resolve_seed",
    "run",
    "write_report",
]
