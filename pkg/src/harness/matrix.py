"""Accountability fault matrix: one derived run per (tid, stall class)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from src.core.errors import ScenarioError
from src.core.models import Party, StallClass
from src.core.utils import log_event
from src.domain.compiler import TransactionWrapper
from src.domain.netsim import Corruption, Misbehaviour
from src.domain.ports import ProtocolMetrics

from .runner import resolve_seed, run
from .scenario import Expectation, PreparedScenario, Scenario, prepare

LOGGER = logging.getLogger(__name__)

STALLS: tuple[StallClass, ...] = tuple(StallClass)

LATE_MARGIN = 2
"""Blocks past the deadline a closed-late transaction is held back."""


@dataclass(frozen=True)
class MatrixCell:
    seq: int
    stall: StallClass
    expected: dict[int, Party]
    actual: dict[int, Party]
    outcome: str | None
    capped: bool

    @property
    def passed(self) -> bool:
        return not self.capped and self.actual == self.expected

    def to_dict(self) -> dict[str, Any]:
        return {
            "seq": self.seq,
            "stall": self.stall.value,
            "expected": {str(seq): party.value for seq, party in sorted(self.expected.items())},
            "actual": {str(seq): party.value for seq, party in sorted(self.actual.items())},
            "outcome": self.outcome,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class MatrixReport:
    scenario: str
    seed: int
    cells: tuple[MatrixCell, ...]

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "cells": [cell.to_dict() for cell in self.cells],
            "passed": self.passed,
        }

    def grid(self) -> str:
        """Pass/fail grid, one row per tid."""
        header = "seq | " + " | ".join(stall.value for stall in STALLS)
        rows = [header, "-" * len(header)]
        for seq in sorted({cell.seq for cell in self.cells}):
            marks = [
                "pass" if cell.passed else "FAIL"
                for stall in STALLS
                for cell in self.cells
                if cell.seq == seq and cell.stall is stall
            ]
            rows.append(f"T{seq} | " + " | ".join(marks))
        return "\n".join(rows) + "\n"


def blamed(stall: StallClass, wrapper: TransactionWrapper) -> dict[int, Party]:
    """Who the decision tree holds accountable when ``wrapper`` stalls at ``stall``."""
    if stall is StallClass.CONTROL:
        return {}
    if stall is StallClass.UNKNOWN:
        return {wrapper.seq: Party.VES}
    if stall is StallClass.INIT:
        # northbound transactions never pass through init
        return {wrapper.seq: Party.CLIENT} if wrapper.originator is Party.CLIENT else {}
    if stall is StallClass.INITED:
        return {wrapper.seq: wrapper.destination}
    return {wrapper.seq: wrapper.originator}


def _fault(stall: StallClass, wrapper: TransactionWrapper) -> tuple[Party, Misbehaviour] | None:
    seqs = frozenset({wrapper.seq})
    if stall is StallClass.UNKNOWN:
        return Party.VES, Misbehaviour(kind="withhold", hook="drive", seqs=seqs)
    if stall is StallClass.INIT:
        # kept for VES-originated tids too, where it must never fire
        return Party.CLIENT, Misbehaviour(kind="withhold", hook="init", seqs=seqs)
    if stall is StallClass.INITED:
        return wrapper.destination, Misbehaviour(kind="withhold", hook="inited", seqs=seqs)
    if stall is StallClass.OPEN:
        return wrapper.originator, Misbehaviour(kind="withhold", hook="open", seqs=seqs)
    if stall is StallClass.OPENED:
        return wrapper.originator, Misbehaviour(kind="withhold", hook="post", seqs=seqs)
    if stall is StallClass.CLOSED_LATE:
        blocks = wrapper.meta.deadline_blocks + LATE_MARGIN
        return wrapper.originator, Misbehaviour(kind="delay", seqs=seqs, blocks=blocks)
    return None


def derive(base: PreparedScenario, seq: int, stall: StallClass) -> tuple[PreparedScenario, dict[int, Party]]:
    """The base scenario with one stall injected at ``seq``, plus the blame it should produce."""
    scenario = base.scenario
    wrapper = base.tdg.wrapper(seq)
    expected = blamed(stall, wrapper)
    update: dict[str, Any] = {
        "name": f"{scenario.name}-t{seq}-{stall.value}",
        "expect": Expectation(resp=expected, nsb_budget=None),
    }
    fault = _fault(stall, wrapper)
    if fault is not None:
        party, behaviour = fault
        update["adversary"] = scenario.adversary.model_copy(
            update={"corruptions": (Corruption(party=party, behaviours=(behaviour,)),)}
        )
    if stall is StallClass.CLOSED_LATE:
        extra = wrapper.meta.deadline_blocks + 2 * LATE_MARGIN
        update["timers"] = scenario.timers.model_copy(
            update={"settle_after_blocks": scenario.timers.settle_after_blocks + extra}
        )
    derived = scenario.model_copy(update=update)
    return PreparedScenario(
        scenario=derived,
        tdg=base.tdg,
        genesis=base.genesis,
        ves_config=base.ves_config,
        nsb_config=base.nsb_config,
    ), expected


def fault_matrix(
    base: Scenario | PreparedScenario, *, seed: int | None = None, metrics: ProtocolMetrics | None = None
) -> MatrixReport:
    """Run every (tid, stall class) cell, the control column included."""
    prepared = base if isinstance(base, PreparedScenario) else prepare(base)
    if prepared.scenario.adversary.corruptions:
        raise ScenarioError(
            "E_SCENARIO_INVALID", f"{prepared.name}: the matrix base scenario must not corrupt any party"
        )
    chosen = resolve_seed(prepared.scenario, seed)
    cells: list[MatrixCell] = []
    for seq in prepared.tdg.seqs:
        for stall in STALLS:
            derived, expected = derive(prepared, seq, stall)
            report = run(derived, seed=chosen, metrics=metrics)
            cell = MatrixCell(
                seq=seq,
                stall=stall,
                expected=expected,
                actual=report.resp,
                outcome=report.outcome,
                capped=report.capped,
            )
            cells.append(cell)
            log_event(
                LOGGER,
                "matrix_cell",
                level=logging.INFO if cell.passed else logging.WARNING,
                scenario=prepared.name,
                seq=seq,
                stall=stall.value,
                passed=cell.passed,
            )
    return MatrixReport(scenario=prepared.name, seed=chosen, cells=tuple(cells))


__all__ = ["MatrixCell", "MatrixReport", "STALLS", "blamed", "derive", "fault_matrix"]
