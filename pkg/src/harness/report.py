"""Run reports: verdicts recomputed from the final chain, NSB and ISC state."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any, Callable, Iterator, Sequence

from src.core.models import Party, TransState, format_decimal
from src.domain.attestation import session_memo, tid_of
from src.domain.chain import Chain, GenesisFile
from src.domain.compiler import Tdg, VesConfig
from src.domain.isc import SettlementRecord
from src.domain.parties import Rejection

from .scenario import Expectation

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartyLedger:
    """One party's balance movement across every account it owns, in ISC units."""

    party: Party
    deltas: dict[str, Decimal]
    total: Decimal
    kept_out: Decimal
    fee_liability: Decimal

    @property
    def atomic(self) -> bool:
        return self.total >= -(self.kept_out + self.fee_liability)

    def to_dict(self) -> dict[str, Any]:
        return {
            "deltas": {key: format_decimal(value) for key, value in sorted(self.deltas.items())},
            "total": format_decimal(self.total),
            "kept_out": format_decimal(self.kept_out),
            "fee_liability": format_decimal(self.fee_liability),
            "atomic": self.atomic,
        }


@dataclass(frozen=True)
class RunReport:
    scenario: str
    sid: str
    seed: int
    outcome: str | None
    states: dict[int, TransState]
    resp: dict[int, Party]
    settlement: SettlementRecord | None
    ledgers: dict[Party, PartyLedger]
    honest: frozenset[Party]
    executed: tuple[int, ...]
    reversions_complete: bool
    nsb_counts: dict[int, int]
    rejections: tuple[tuple[str, Rejection], ...]
    claim_errors: tuple[tuple[str, str], ...]
    trace_digest: str
    steps: int
    capped: bool
    mismatches: tuple[str, ...] = field(default=())

    @property
    def atomic(self) -> bool:
        """Every honest party's ledger holds and a failed run reverted every closed transaction."""
        return self.reversions_complete and all(self.ledgers[party].atomic for party in self.honest)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def rejection_codes(self) -> set[str]:
        return {rejection.code for _, rejection in self.rejections}

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "sid": self.sid,
            "seed": self.seed,
            "outcome": self.outcome,
            "states": {str(seq): state.value for seq, state in sorted(self.states.items())},
            "resp": {str(seq): party.value for seq, party in sorted(self.resp.items())},
            "settlement": None if self.settlement is None else self.settlement.to_dict(),
            "balances": {party.value: ledger.to_dict() for party, ledger in self.ledgers.items()},
            "honest": sorted(party.value for party in self.honest),
            "executed": list(self.executed),
            "atomic": self.atomic,
            "nsb_counts": {str(seq): count for seq, count in sorted(self.nsb_counts.items())},
            "rejections": [
                {"party": party, "code": item.code, "handler": item.handler, "seq": item.seq}
                for party, item in self.rejections
            ],
            "claim_errors": [{"party": party, "code": code} for party, code in self.claim_errors],
            "trace_digest": self.trace_digest,
            "steps": self.steps,
            "capped": self.capped,
            "mismatches": list(self.mismatches),
            "passed": self.passed,
        }


def executed_seqs(tdg: Tdg, chains: dict[str, Chain], sid: str) -> tuple[int, ...]:
    """Wrappers whose session T~ made it into a block with an ``ok`` receipt."""
    memos = {session_memo(sid, wrapper.seq): wrapper.seq for wrapper in tdg.wrappers}
    executed: set[int] = set()
    for chain in chains.values():
        for height in range(chain.height + 1):
            block = chain.block(height)
            for tx, receipt in zip(chain.transactions(height), block.receipts):
                seq = memos.get(tx.memo)
                if seq is not None and receipt.ok:
                    executed.add(seq)
    return tuple(sorted(executed))


def _units(genesis: GenesisFile, chains: dict[str, Chain]) -> Iterator[tuple[str, str]]:
    for item in genesis.chains:
        units = {unit for account in item.accounts for unit in account.balances}
        chain = chains[item.chain_id]
        for height in range(chain.height + 1):
            units.update(tx.unit for tx in chain.transactions(height))
        for unit in sorted(units):
            yield item.chain_id, unit


def party_ledgers(
    *,
    genesis: GenesisFile,
    chains: dict[str, Chain],
    config: VesConfig,
    tdg: Tdg,
    settlement: SettlementRecord | None,
    executed: tuple[int, ...],
) -> dict[Party, PartyLedger]:
    """Balance deltas per party, and the allowances the atomicity predicate grants each one."""
    deltas: dict[Party, dict[str, Decimal]] = {party: defaultdict(Decimal) for party in Party}
    accounts = {(item.chain_id, account.address): account for item in genesis.chains for account in item.accounts}
    for chain_id, unit in _units(genesis, chains):
        rate = config.rate_of(unit) or Decimal(0)
        for (account_chain, address), account in accounts.items():
            if account_chain != chain_id or account.owner not in {party.value for party in Party}:
                continue
            change = chains[chain_id].balance(address, unit) - account.balances.get(unit, 0)
            if change:
                deltas[Party(account.owner)][f"{chain_id}/{unit}"] += change * rate
    reverted = set(settlement.reversions) if settlement is not None else set()
    fee = Decimal(tdg.session.fee_allowance)
    ledgers: dict[Party, PartyLedger] = {}
    for party in Party:
        own = [seq for seq in executed if seq not in reverted and tdg.wrapper(seq).originator is party]
        kept_out = sum((Decimal(tdg.wrapper(seq).meta.amt) for seq in own), Decimal(0))
        liability = fee * sum(1 for seq in reverted if tdg.wrapper(seq).destination is party)
        moved = dict(deltas[party])
        ledgers[party] = PartyLedger(
            party=party,
            deltas=moved,
            total=sum(moved.values(), Decimal(0)),
            kept_out=kept_out,
            fee_liability=liability,
        )
    return ledgers


def reversions_complete(tdg: Tdg, settlement: SettlementRecord | None) -> bool:
    """In a failed settlement every closed transaction is reverted by exactly its ``amt``."""
    if settlement is None or settlement.outcome != "failure":
        return True
    for seq, state in settlement.states.items():
        amt = tdg.wrapper(seq).meta.amt
        if state < TransState.CLOSED or amt == 0:
            continue
        revert = settlement.reversions.get(seq)
        if revert is None or revert.amt != amt:
            LOGGER.debug("T%s closed without a full reversion", seq)
            return False
    return True


def nsb_counts(tdg: Tdg, submissions_for: Callable[[str], Sequence[object]]) -> dict[int, int]:
    return {wrapper.seq: len(submissions_for(tid_of(wrapper))) for wrapper in tdg.wrappers}


def check_expectations(report: RunReport, expect: Expectation) -> tuple[str, ...]:
    """Compare a finished report with the scenario's declared verdicts."""
    problems: list[str] = []
    if report.capped:
        problems.append(f"run capped after {report.steps} steps before settlement")
    if expect.outcome is not None and report.outcome != expect.outcome:
        problems.append(f"outcome {report.outcome} != expected {expect.outcome}")
    for seq, state in sorted(expect.states.items()):
        actual = report.states.get(seq)
        if actual is not state:
            problems.append(f"T{seq} ended {actual.value if actual else None}, expected {state.value}")
    if expect.resp_partial:
        for seq, party in sorted(expect.resp.items()):
            if report.resp.get(seq) is not party:
                problems.append(f"resp[T{seq}] is not {party.value}")
    elif report.resp != expect.resp:
        actual_resp = {seq: party.value for seq, party in sorted(report.resp.items())}
        expected_resp = {seq: party.value for seq, party in sorted(expect.resp.items())}
        problems.append(f"resp {actual_resp} != expected {expected_resp}")
    if expect.atomic and not report.atomic:
        problems.append("atomicity predicate violated")
    if expect.nsb_budget is not None:
        over = {seq: count for seq, count in report.nsb_counts.items() if count > expect.nsb_budget}
        if over:
            problems.append(f"NSB transactions over budget {expect.nsb_budget}: {over}")
    missing = sorted(set(expect.rejections) - report.rejection_codes())
    if missing:
        problems.append(f"expected rejections not recorded: {missing}")
    return tuple(problems)


__all__ = [
    "PartyLedger",
    "RunReport",
    "check_expectations",
    "executed_seqs",
    "nsb_counts",
    "party_ledgers",
    "reversions_complete",
]
