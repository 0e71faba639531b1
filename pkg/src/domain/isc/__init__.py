"""Insurance smart contract: claims, timeout settlement and reversions."""
from __future__ import annotations

from .arbitrator import STAKE_METHOD, InsuranceArbitrator, contract_id
from .config import TimerConfig
from .rules import deadline_verify, dirty_trans, fresh, responsible_party
from .state import IscContract, Payout, Reversion, SettlementOutcome, SettlementRecord, TxRecord

__all__ = [
    "InsuranceArbitrator",
    "IscContract",
    "Payout",
    "Reversion",
    "STAKE_METHOD",
    "SettlementOutcome",
    "SettlementRecord",
    "TimerConfig",
    "TxRecord",
    "contract_id",
    "deadline_verify",
    "dirty_trans",
    "fresh",
    "responsible_party",
]
