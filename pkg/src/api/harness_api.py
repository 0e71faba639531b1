"""Public API facade over the compiler and the scenario harness."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.config import get_settings
from src.core.errors import ScenarioError, UipError
from src.core.models import Party
from src.core.utils import pretty_json
from src.domain.compiler import DEFAULT_CAP, Tdg, load_ves_config, stake_requirement
from src.domain.ports import ProtocolMetrics
from src.harness import compile_file, fault_matrix, load_scenario, run, write_report
from src.infrastructure.files import read_text, write_atomic

LOGGER = logging.getLogger(__name__)


@dataclass
class HarnessResponse:
    """Response envelope returned by every facade call."""

    ok: bool
    payload: dict[str, Any]


def _failure(exc: UipError) -> HarnessResponse:
    LOGGER.debug("request failed with %s", exc.code)
    return HarnessResponse(ok=False, payload=exc.to_payload())


def compile_program_file(
    program: Path, interfaces: Path, output: Path | None = None, *, ves_config: Path | None = None
) -> HarnessResponse:
    """Compile an HSL program; the Tdg is written to ``output`` when given."""
    try:
        config = load_ves_config(ves_config or get_settings().ves_config_path)
        tdg = compile_file(program, interfaces, config)
    except UipError as exc:
        return _failure(exc)
    if output is not None:
        write_atomic(output, tdg.to_json())
    return HarnessResponse(
        ok=True,
        payload={
            "wrappers": len(tdg),
            "digest": tdg.digest().hex(),
            "output": None if output is None else str(output),
        },
    )


def run_scenario(
    path: Path,
    *,
    seed: int | None = None,
    report: Path | None = None,
    metrics: ProtocolMetrics | None = None,
) -> HarnessResponse:
    """Run one scenario file; ``ok`` means the run matched every declared expectation."""
    try:
        result = run(load_scenario(path), seed=seed, metrics=metrics)
    except UipError as exc:
        return _failure(exc)
    if report is not None:
        write_report(result, report)
    return HarnessResponse(ok=result.passed, payload=result.to_dict())


def run_matrix(
    path: Path,
    *,
    seed: int | None = None,
    report: Path | None = None,
    metrics: ProtocolMetrics | None = None,
) -> HarnessResponse:
    try:
        matrix = fault_matrix(load_scenario(path), seed=seed, metrics=metrics)
    except UipError as exc:
        return _failure(exc)
    payload = matrix.to_dict()
    if report is not None:
        write_atomic(report, pretty_json(payload))
    payload["grid"] = matrix.grid()
    return HarnessResponse(ok=matrix.passed, payload=payload)


def stake_for(tdg_path: Path, party: Party | str, *, cap: int = DEFAULT_CAP) -> HarnessResponse:
    """Stake ``party`` must lock for the Tdg stored at ``tdg_path``."""
    try:
        chosen = Party(party)
    except ValueError:
        return _failure(ScenarioError("E_UNKNOWN_PARTY", f"{party} is not a party", details={"party": str(party)}))
    try:
        tdg = Tdg.from_json(read_text(tdg_path))
    except ValidationError as exc:
        return _failure(
            ScenarioError(
                "E_SCENARIO_INVALID",
                f"{tdg_path} is not a Tdg file",
                details={"errors": exc.errors(include_url=False, include_context=False)},
            )
        )
    except UipError as exc:
        return _failure(exc)
    try:
        amount = stake_requirement(tdg, chosen, cap=cap)
    except UipError as exc:
        return _failure(exc)
    return HarnessResponse(ok=True, payload={"party": chosen.value, "stake": amount, "wrappers": len(tdg)})


__all__ = ["HarnessResponse", "compile_program_file", "run_matrix", "run_scenario", "stake_for"]
