"""Certificates, on-chain evidence and T~ computation shared by the protocol actors."""
from __future__ import annotations

from .certificate import CERTIFIED_STATES, CertPayload, Certificate, Signature, issue, tid_of
from .evidence import (
    ActionProof,
    Attestation,
    FinalityProof,
    MerkleAttestation,
    StateEvidence,
    StatusProof,
    attestation_kind,
    status_key,
    status_value,
)
from .transactions import associated, build_transaction, consumed_keys, memo_session, session_memo, state_key

__all__ = [
    "ActionProof",
    "Attestation",
    "CERTIFIED_STATES",
    "CertPayload",
    "Certificate",
    "FinalityProof",
    "MerkleAttestation",
    "Signature",
    "StateEvidence",
    "StatusProof",
    "associated",
    "attestation_kind",
    "build_transaction",
    "consumed_keys",
    "issue",
    "memo_session",
    "session_memo",
    "state_key",
    "status_key",
    "status_value",
    "tid_of",
]
