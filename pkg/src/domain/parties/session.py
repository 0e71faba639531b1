"""Per-party session state: certificates, proofs and the local view of every tid."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from src.core.models import CertKind, Party, TransState
from src.domain.attestation import Attestation, Certificate, FinalityProof, MerkleAttestation, tid_of
from src.domain.chain import OnChainTransaction
from src.domain.compiler import Tdg, TransactionWrapper


@dataclass(frozen=True)
class Rejection:
    """A diagnosable refusal by a party handler."""

    code: str
    tid: str
    handler: str
    seq: int | None = None


@dataclass
class TidView:
    wrapper: TransactionWrapper
    state: TransState = TransState.UNKNOWN
    certs: dict[CertKind, Certificate] = field(default_factory=dict)
    merks: dict[CertKind, MerkleAttestation] = field(default_factory=dict)
    tx: OnChainTransaction | None = None
    ts_open: int | None = None
    ts_closed: int | None = None
    finality: FinalityProof | None = None
    finality_seen_at: int | None = None
    proven: dict[str, str] = field(default_factory=dict)
    dispatched: bool = False
    posted: bool = False
    post_at: int | None = None
    close_sent: bool = False
    status_claimed: bool = False
    tid: str = field(init=False)

    def __post_init__(self) -> None:
        self.tid = tid_of(self.wrapper)

    @property
    def seq(self) -> int:
        return self.wrapper.seq

    def advance(self, state: TransState) -> bool:
        """Move the local view forward; never backwards."""
        if state <= self.state:
            return False
        self.state = state
        return True

    def best_attestation(self) -> Attestation | None:
        """The most advanced attestation the ISC would accept: dual-signed certs or Merkle proofs."""
        candidates: list[Attestation] = [cert for cert in self.certs.values() if cert.dual_signed]
        candidates += list(self.merks.values())
        if not candidates:
            return None
        # plain certificates win ties
        return max(candidates, key=lambda item: (item.kind.state.rank, isinstance(item, Certificate)))


@dataclass
class Session:
    sid: str
    role: Party
    tdg: Tdg
    views: dict[int, TidView]
    cid: str | None = None
    created_at: int | None = None
    activated_at: int | None = None
    timer: int | None = None
    staked: int = 0
    counterparty_ack: bool | None = None
    claimed: bool = False
    known: set[bytes] = field(default_factory=set)
    rejections: list[Rejection] = field(default_factory=list)

    @classmethod
    def open(cls, sid: str, role: Party, tdg: Tdg) -> "Session":
        return cls(sid=sid, role=role, tdg=tdg, views={wrapper.seq: TidView(wrapper) for wrapper in tdg.wrappers})

    @property
    def active(self) -> bool:
        return self.activated_at is not None

    def view(self, seq: int) -> TidView:
        return self.views[seq]

    def view_for(self, tid: str) -> TidView | None:
        return next((view for view in self.views.values() if view.tid == tid), None)

    def order(self) -> list[int]:
        """Wrapper seqs in a stable topological order."""
        return list(nx.lexicographical_topological_sort(self.tdg.graph()))

    def states(self) -> dict[int, TransState]:
        return {seq: view.state for seq, view in sorted(self.views.items())}


__all__ = ["Rejection", "Session", "TidView"]
