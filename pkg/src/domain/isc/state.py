"""ISC bookkeeping: per-transaction records, reversions and settlement results."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

from src.core.models import Party, TransState
from src.domain.chain import OnChainTransaction
from src.domain.compiler import Tdg, TransactionWrapper

SettlementOutcome = Literal["success", "failure", "aborted"]


@dataclass
class TxRecord:
    tid: str
    wrapper: TransactionWrapper
    state: TransState = TransState.UNKNOWN
    ts_open: int = 0
    ts_closed: int = 0
    st_proof: dict[str, str] = field(default_factory=dict)
    tx: OnChainTransaction | None = None

    @property
    def seq(self) -> int:
        return self.wrapper.seq


@dataclass
class Reversion:
    amt: int
    dst: str


@dataclass
class IscContract:
    cid: str
    sid: str
    tdg: Tdg
    created_at: int
    requirements: dict[Party, int]
    st: dict[str, TxRecord]
    a_revs: dict[str, Reversion]
    f_stake: dict[Party, int] = field(default_factory=lambda: {party: 0 for party in Party})
    activated_at: int | None = None
    timer: int | None = None
    resp: dict[str, Party] = field(default_factory=dict)

    @property
    def active(self) -> bool:
        return self.activated_at is not None

    def by_seq(self, seq: int) -> TxRecord:
        return next(record for record in self.st.values() if record.seq == seq)

    def stake_satisfied(self) -> bool:
        return all(self.f_stake[party] >= required for party, required in self.requirements.items())


@dataclass(frozen=True)
class Payout:
    party: Party
    address: str
    amount: int


@dataclass(frozen=True)
class SettlementRecord:
    """What the ISC decided before erasing its bookkeeping."""

    cid: str
    sid: str
    outcome: SettlementOutcome
    height: int
    states: dict[int, TransState]
    dirty: tuple[int, ...]
    resp: dict[int, Party]
    reversions: dict[int, Reversion]
    shortfall: dict[Party, int]
    stakes: dict[Party, int]
    payouts: tuple[Payout, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "cid": self.cid,
            "outcome": self.outcome,
            "height": self.height,
            "states": {str(seq): state.value for seq, state in sorted(self.states.items())},
            "dirty": list(self.dirty),
            "resp": {str(seq): party.value for seq, party in sorted(self.resp.items())},
            "reversions": {
                str(seq): {"amt": item.amt, "dst": item.dst} for seq, item in sorted(self.reversions.items())
            },
            "shortfall": {party.value: amount for party, amount in self.shortfall.items() if amount},
            "stakes": {party.value: amount for party, amount in self.stakes.items()},
            "payouts": [
                {"party": item.party.value, "address": item.address, "amount": item.amount} for item in self.payouts
            ],
        }


__all__ = ["IscContract", "Payout", "Reversion", "SettlementOutcome", "SettlementRecord", "TxRecord"]
