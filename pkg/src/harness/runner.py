"""``run(scenario)``: build the world, drive it to settlement and report what happened."""
from __future__ import annotations

import logging
from dataclasses import replace
from pathlib import Path

from src.config import get_settings
from src.core.models import Party, TransState
from src.core.utils import log_event, pretty_json
from src.domain.ports import ProtocolMetrics
from src.infrastructure.files import write_atomic

from .report import RunReport, check_expectations, executed_seqs, nsb_counts, party_ledgers, reversions_complete
from .scenario import PreparedScenario, Scenario, prepare
from .world import World

LOGGER = logging.getLogger(__name__)


def resolve_seed(scenario: Scenario, seed: int | None) -> int:
    if seed is not None:
        return seed
    if scenario.seed is not None:
        return scenario.seed
    return get_settings().default_seed


def run(
    scenario: Scenario | PreparedScenario, *, seed: int | None = None, metrics: ProtocolMetrics | None = None
) -> RunReport:
    """Run one scenario to settlement; the report is a pure function of scenario and seed."""
    prepared = scenario if isinstance(scenario, PreparedScenario) else prepare(scenario)
    chosen = resolve_seed(prepared.scenario, seed)
    world = World.build(prepared, seed=chosen, metrics=metrics)
    outcome = world.run()
    report = build_report(world, steps=outcome.steps, capped=outcome.capped)
    mismatches = check_expectations(report, prepared.scenario.expect)
    report = replace(report, mismatches=mismatches)
    log_event(
        LOGGER,
        "run_verdict",
        level=logging.INFO if report.passed else logging.WARNING,
        sid=world.sid,
        outcome=report.outcome,
        atomic=report.atomic,
        mismatches=list(mismatches),
    )
    return report


def build_report(world: World, *, steps: int, capped: bool) -> RunReport:
    prepared = world.prepared
    tdg = prepared.tdg
    settlement = world.settlement()
    if settlement is not None:
        states = dict(settlement.states)
    else:
        live = next((item for item in world.isc.arbitrator.contracts.values() if item.sid == world.sid), None)
        states = (
            {record.seq: record.state for record in live.st.values()}
            if live is not None
            else {seq: TransState.UNKNOWN for seq in tdg.seqs}
        )
    executed = executed_seqs(tdg, world.chains, world.sid)
    ledgers = party_ledgers(
        genesis=prepared.genesis,
        chains=world.chains,
        config=prepared.ves_config,
        tdg=tdg,
        settlement=settlement,
        executed=executed,
    )
    rejections = tuple(
        (party.name, rejection)
        for party in world.parties
        for session in party.sessions.values()
        for rejection in session.rejections
    )
    return RunReport(
        scenario=prepared.name,
        sid=world.sid,
        seed=world.seed,
        outcome=settlement.outcome if settlement is not None else None,
        states=dict(sorted(states.items())),
        resp=dict(settlement.resp) if settlement is not None else {},
        settlement=settlement,
        ledgers=ledgers,
        honest=frozenset(party for party in Party if prepared.scenario.adversary.honest(party)),
        executed=executed,
        reversions_complete=reversions_complete(tdg, settlement),
        nsb_counts=nsb_counts(tdg, world.nsb.submissions_for),
        rejections=rejections,
        claim_errors=tuple(world.isc.claim_errors),
        trace_digest=world.network.trace_digest(),
        steps=steps,
        capped=capped,
    )


def write_report(report: RunReport, path: Path) -> Path:
    """Canonical, sorted-key JSON; replaced atomically."""
    return write_atomic(path, pretty_json(report.to_dict()))


__all__ = ["build_report", "resolve_seed", "run", "write_report"]
