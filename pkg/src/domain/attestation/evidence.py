"""On-chain evidence: proofs of action, chain finality and NSB status linkage."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from src.core.models import CertKind
from src.core.utils import canonical_bytes
from src.domain.chain import OnChainTransaction, tx_leaf_value, var_key
from src.domain.merkle import MembershipProof, verify_membership

from .certificate import Certificate
from .transactions import state_key


def status_key(height: int) -> bytes:
    """Per-chain StatusMT key: the chain height as u64 big-endian, so keys sort by height."""
    return height.to_bytes(8, "big")


def status_value(height: int, tx_root: bytes, state_root: bytes) -> bytes:
    return canonical_bytes({"height": height, "tx_root": tx_root, "state_root": state_root})


@dataclass(frozen=True)
class ActionProof:
    """Proof of action: a certificate staked under the ActionRoot of NSB block ``height``."""

    height: int
    proof: MembershipProof

    def verify(self, cert: Certificate, action_root: bytes) -> bool:
        return (
            self.proof.key == cert.key()
            and self.proof.value == cert.encode()
            and verify_membership(action_root, self.proof)
        )


@dataclass(frozen=True)
class StateEvidence:
    contract: str
    var: str
    proof: MembershipProof

    @property
    def key(self) -> str:
        return state_key(self.contract, self.var)

    @property
    def value(self) -> str:
        return self.proof.value.decode("utf-8")


@dataclass(frozen=True)
class FinalityProof:
    """The chain half of a closing proof: T~ in TxMT plus the consumed state after it."""

    chain: str
    height: int
    tx_root: bytes
    state_root: bytes
    tx_proof: MembershipProof
    state: tuple[StateEvidence, ...] = ()

    def verify(self, tx: OnChainTransaction) -> bool:
        if tx.chain != self.chain:
            return False
        if self.tx_proof.key != bytes.fromhex(tx.tx_id) or self.tx_proof.value != tx_leaf_value(tx, "ok"):
            return False
        if not verify_membership(self.tx_root, self.tx_proof):
            return False
        return all(
            item.proof.key == var_key(item.contract, item.var) and verify_membership(self.state_root, item.proof)
            for item in self.state
        )

    def header(self) -> bytes:
        return status_value(self.height, self.tx_root, self.state_root)

    def values(self) -> dict[str, str]:
        return {item.key: item.value for item in self.state}


@dataclass(frozen=True)
class StatusProof:
    """Two-level StatusMT proof: the chain subtree leaf and the subtree root under the top index."""

    nsb_height: int
    chain: str
    subtree: MembershipProof
    top: MembershipProof

    def verify(self, status_root: bytes) -> bool:
        return (
            self.top.key == self.chain.encode("utf-8")
            and self.top.value == self.subtree.root
            and verify_membership(self.subtree.root, self.subtree)
            and verify_membership(status_root, self.top)
        )

    def covers(self, finality: FinalityProof) -> bool:
        return (
            finality.chain == self.chain
            and self.subtree.key == status_key(finality.height)
            and self.subtree.value == finality.header()
        )


@dataclass(frozen=True)
class MerkleAttestation:
    """``Merk``: an enclosed certificate with its proof of action, or a complete closing proof.

    The complete closing form carries a close request (for T and T~) plus both the
    finality half and the status half.
    """

    cert: Certificate
    action: ActionProof | None = None
    finality: FinalityProof | None = None
    status: StatusProof | None = None

    @property
    def closing(self) -> bool:
        return self.finality is not None and self.status is not None

    @property
    def kind(self) -> CertKind:
        return CertKind.CLOSED if self.closing else self.cert.kind

    @property
    def tid(self) -> str:
        return self.cert.tid

    @property
    def seq(self) -> int:
        return self.cert.seq


Attestation = Union[Certificate, MerkleAttestation]


def attestation_kind(attestation: Attestation) -> CertKind:
    return attestation.kind


__all__ = [
    "ActionProof",
    "Attestation",
    "FinalityProof",
    "MerkleAttestation",
    "StateEvidence",
    "StatusProof",
    "attestation_kind",
    "status_key",
    "status_value",
]
