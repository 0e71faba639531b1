"""Wire messages exchanged over the bus; ``encode`` feeds the trace digest."""
from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

from src.core.utils import canonical_bytes
from src.domain.attestation import Attestation, Certificate, FinalityProof, MerkleAttestation
from src.domain.compiler import Tdg


@dataclass(frozen=True)
class CertMessage:
    """The channel leg of a dual-medium certificate, plus finality proofs of consumed upstreams."""

    kind: ClassVar[str] = "cert"

    cert: Certificate
    evidence: tuple[tuple[int, FinalityProof], ...] = ()

    def encode(self) -> bytes:
        return canonical_bytes(
            {"cert": self.cert, "evidence": [(seq, proof.header()) for seq, proof in self.evidence]}
        )


@dataclass(frozen=True)
class ContractRequest:
    kind: ClassVar[str] = "contract_request"

    sid: str
    tdg: Tdg
    parties: tuple[str, ...]

    def encode(self) -> bytes:
        return canonical_bytes({"sid": self.sid, "tdg": self.tdg.digest(), "parties": self.parties})


@dataclass(frozen=True)
class ContractCreated:
    kind: ClassVar[str] = "contract_created"

    sid: str
    cid: str
    tdg: Tdg
    created_at: int

    def encode(self) -> bytes:
        return canonical_bytes({"sid": self.sid, "cid": self.cid, "at": self.created_at})


@dataclass(frozen=True)
class ContractAck:
    kind: ClassVar[str] = "contract_ack"

    sid: str
    cid: str
    accepted: bool

    def encode(self) -> bytes:
        return canonical_bytes({"sid": self.sid, "cid": self.cid, "accepted": self.accepted})


@dataclass(frozen=True)
class SessionActivated:
    kind: ClassVar[str] = "session_activated"

    sid: str
    cid: str
    activated_at: int
    timer: int

    def encode(self) -> bytes:
        return canonical_bytes(
            {"sid": self.sid, "cid": self.cid, "activated_at": self.activated_at, "timer": self.timer}
        )


@dataclass(frozen=True)
class Claim:
    kind: ClassVar[str] = "claim"

    cid: str
    attestation: Attestation

    def encode(self) -> bytes:
        cert = self.attestation.cert if isinstance(self.attestation, MerkleAttestation) else self.attestation
        return canonical_bytes({"cid": self.cid, "kind": self.attestation.kind.value, "cert": cert})


PartyMessage = Union[CertMessage, ContractCreated, ContractAck, SessionActivated]
IscMessage = Union[ContractRequest, Claim]

__all__ = [
    "CertMessage",
    "Claim",
    "ContractAck",
    "ContractCreated",
    "ContractRequest",
    "IscMessage",
    "PartyMessage",
    "SessionActivated",
]
