"""Scenario files: what world to build, which faults to inject and what the run must show."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config import get_settings
from src.core.errors import ScenarioError, UipError
from src.core.models import Party, TransState
from src.core.utils import log_event
from src.domain.chain import GenesisFile, load_genesis
from src.domain.compiler import Tdg, VesConfig, compile_program, load_ves_config
from src.domain.hsl import load_interfaces, parse_hsl, validate
from src.domain.isc import SettlementOutcome, TimerConfig
from src.domain.netsim import AdversaryScript
from src.domain.nsb import NsbConfig, QuorumConfig
from src.infrastructure.files import read_text, read_yaml

LOGGER = logging.getLogger(__name__)

PATH_FIELDS = ("program", "interfaces", "tdg", "genesis", "ves_config")
ENDPOINTS = frozenset({"*", "isc", *(party.value for party in Party)})

SETUP_BLOCKS = 4
TID_BLOCKS = 6
"""NSB blocks one transaction needs on the slowest honest path, before close patience."""


class Expectation(BaseModel):
    """Verdicts the run must reproduce; unset fields are not checked."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    outcome: SettlementOutcome | None = None
    states: dict[int, TransState] = Field(default_factory=dict)
    resp: dict[int, Party] = Field(default_factory=dict)
    resp_partial: bool = Field(False, description="resp must contain these entries rather than equal them")
    atomic: bool = True
    nsb_budget: int | None = Field(6, ge=1, description="largest NSB transaction count allowed per tid")
    rejections: tuple[str, ...] = Field((), description="codes some party must have recorded")


class ClockSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_steps: int = Field(50_000, ge=1)
    nsb_every: int = Field(2, ge=1, description="ticks per NSB block; chains produce one block per tick")


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1)
    program: Path | None = None
    interfaces: Path | None = None
    tdg: Path | None = None
    genesis: Path
    ves_config: Path | None = None
    nsb: NsbConfig = Field(default_factory=NsbConfig)
    timers: TimerConfig = Field(default_factory=TimerConfig)
    clock: ClockSettings = Field(default_factory=ClockSettings)
    adversary: AdversaryScript = Field(default_factory=AdversaryScript)
    seed: int | None = None
    escrow: str = "0x15c000"
    expect: Expectation = Field(default_factory=Expectation)
    expect_failure: bool = Field(False, description="timer may be shorter than the honest critical path")

    @model_validator(mode="after")
    def _one_source(self) -> "Scenario":
        if (self.program is None) == (self.tdg is None):
            raise ValueError("a scenario needs exactly one of program or tdg")
        for rule in self.adversary.links:
            stray = {rule.source, rule.target} - ENDPOINTS
            if stray:
                raise ValueError(f"link rule names unknown endpoints {sorted(stray)}")
        return self


@dataclass(frozen=True)
class PreparedScenario:
    """A scenario with every reference loaded and cross-checked."""

    scenario: Scenario
    tdg: Tdg
    genesis: GenesisFile
    ves_config: VesConfig
    nsb_config: NsbConfig

    @property
    def name(self) -> str:
        return self.scenario.name


def parse_scenario(data: Any, *, base_dir: Path) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("E_SCENARIO_INVALID", "a scenario file must hold a mapping")
    resolved = dict(data)
    for key in PATH_FIELDS:
        if resolved.get(key) is not None:
            resolved[key] = (base_dir / str(resolved[key])).resolve()
    try:
        return Scenario.model_validate(resolved)
    except ValidationError as exc:
        raise ScenarioError(
            "E_SCENARIO_INVALID",
            f"invalid scenario {data.get('name', '<unnamed>')}",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


def load_scenario(path: Path) -> Scenario:
    scenario = parse_scenario(read_yaml(path), base_dir=path.parent)
    LOGGER.debug("loaded scenario %s from %s", scenario.name, path)
    return scenario


def compile_file(program: Path, interfaces: Path, config: VesConfig) -> Tdg:
    """Parse, validate and lower one HSL program."""
    parsed = parse_hsl(read_text(program), file=program.name)
    validated = validate(parsed, load_interfaces(interfaces, parsed.import_files), file=program.name)
    return compile_program(validated, config)


def critical_path_blocks(tdg: Tdg, timers: TimerConfig) -> int:
    """NSB blocks the slowest honest run needs from contract request to claims."""
    if not tdg.wrappers:
        return SETUP_BLOCKS + timers.claim_lead_blocks
    depth = nx.dag_longest_path_length(tdg.graph()) + 1
    return SETUP_BLOCKS + depth * (TID_BLOCKS + 2 * timers.close_patience_blocks) + timers.claim_lead_blocks


def prepare(scenario: Scenario) -> PreparedScenario:
    """Load the program or Tdg, genesis and VES config, then check they fit together."""
    try:
        config = load_ves_config(scenario.ves_config or get_settings().ves_config_path)
        genesis = load_genesis(scenario.genesis)
        tdg = _load_tdg(scenario, config)
    except ScenarioError:
        raise
    except UipError as exc:
        raise ScenarioError(exc.code, f"{scenario.name}: {exc.message}", details=exc.details) from exc
    try:
        quorum = QuorumConfig.model_validate(
            {
                **scenario.nsb.quorum.model_dump(),
                "dishonest": scenario.nsb.quorum.dishonest | scenario.adversary.nsb_dishonest,
            }
        )
    except ValidationError as exc:
        raise ScenarioError(
            "E_SCENARIO_INVALID",
            f"{scenario.name}: adversary corrupts NSB peers that do not exist",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc
    prepared = PreparedScenario(
        scenario=scenario,
        tdg=tdg,
        genesis=genesis,
        ves_config=config,
        nsb_config=scenario.nsb.model_copy(update={"quorum": quorum}),
    )
    _check_references(prepared)
    _check_timer(prepared)
    log_event(LOGGER, "scenario_prepared", level=logging.DEBUG, scenario=scenario.name, wrappers=len(tdg))
    return prepared


def _load_tdg(scenario: Scenario, config: VesConfig) -> Tdg:
    if scenario.tdg is not None:
        try:
            return Tdg.from_json(read_text(scenario.tdg))
        except ValidationError as exc:
            raise ScenarioError(
                "E_SCENARIO_INVALID",
                f"{scenario.tdg} is not a Tdg file",
                details={"errors": exc.errors(include_url=False, include_context=False)},
            ) from exc
    assert scenario.program is not None
    interfaces = scenario.interfaces or scenario.program.parent
    return compile_file(scenario.program, interfaces, config)


def _check_references(prepared: PreparedScenario) -> None:
    chains = prepared.genesis.by_id()
    tdg, config, name = prepared.tdg, prepared.ves_config, prepared.name
    missing = sorted({wrapper.meta.chain for wrapper in tdg.wrappers} - set(chains))
    if missing:
        raise ScenarioError("E_UNRESOLVED_REFERENCE", f"{name}: no genesis for chains {missing}")
    host = chains.get(tdg.session.isc_chain)
    if host is None:
        raise ScenarioError("E_UNRESOLVED_REFERENCE", f"{name}: ISC chain {tdg.session.isc_chain} has no genesis")
    escrow = next((item for item in host.contracts if item.address == prepared.scenario.escrow), None)
    if escrow is None or escrow.handler != "isc_escrow" or escrow.owner is None:
        raise ScenarioError(
            "E_UNRESOLVED_REFERENCE",
            f"{name}: {prepared.scenario.escrow} is not a signing ISC escrow on {host.chain_id}",
        )
    owners = {account.address: account.owner for account in host.accounts}
    for party in Party:
        address = config.refund_accounts.get(party)
        if address is None or owners.get(address) != party.value:
            raise ScenarioError(
                "E_UNRESOLVED_REFERENCE", f"{name}: refund account for {party.value} is not a {party.value} account"
            )
    units = {unit for chain in chains.values() for account in chain.accounts for unit in account.balances}
    unpriced = sorted(unit for unit in units if config.rate_of(unit) is None)
    if unpriced:
        raise ScenarioError("E_UNRESOLVED_REFERENCE", f"{name}: no ISC rate for units {unpriced}")


def _check_timer(prepared: PreparedScenario) -> None:
    scenario = prepared.scenario
    needed = critical_path_blocks(prepared.tdg, scenario.timers)
    if scenario.timers.settle_after_blocks < needed and not scenario.expect_failure:
        raise ScenarioError(
            "E_TIMEOUT_TOO_SHORT",
            f"{scenario.name}: ISC timer of {scenario.timers.settle_after_blocks} blocks is below "
            f"the {needed}-block honest critical path",
            details={"timer": scenario.timers.settle_after_blocks, "critical_path": needed},
        )


__all__ = [
    "ClockSettings",
    "Expectation",
    "PreparedScenario",
    "Scenario",
    "compile_file",
    "critical_path_blocks",
    "load_scenario",
    "parse_scenario",
    "prepare",
]
