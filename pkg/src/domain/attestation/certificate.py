"""Signed state certificates exchanged between the VES and the dApp client."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.models import CertKind, Party, TransState
from src.core.utils import KeyDirectory, SigningKey, canonical_bytes, digest_of, hex_digest
from src.domain.chain import OnChainTransaction
from src.domain.compiler import TransactionWrapper

CERTIFIED_STATES = frozenset({TransState.INIT, TransState.INITED, TransState.OPEN, TransState.CLOSED})


def tid_of(wrapper: TransactionWrapper) -> str:
    """Transaction id: the digest of the wrapper."""
    return hex_digest(wrapper)


class CertPayload(BaseModel):
    """The signed claim ``[T~, state, sid, T, ts]``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sid: str
    tid: str
    state: TransState
    wrapper: TransactionWrapper
    tx: OnChainTransaction | None = None
    ts_open: int | None = Field(None, ge=0)
    ts_closed: int | None = Field(None, ge=0)
    state_values: dict[str, str] = Field(
        default_factory=dict, description="contract.var values proven at the closing block"
    )

    @model_validator(mode="after")
    def _shape(self) -> "CertPayload":
        if self.state not in CERTIFIED_STATES:
            raise ValueError(f"state {self.state.value} cannot be certified")
        if self.tid != tid_of(self.wrapper):
            raise ValueError("tid does not match the enclosed wrapper")
        if self.state is not TransState.INIT and self.tx is None:
            raise ValueError(f"{self.state.value} certificates enclose the on-chain transaction")
        if self.state is TransState.OPEN and self.ts_open is None:
            raise ValueError("open certificates carry ts_open")
        if self.state is TransState.CLOSED and self.ts_closed is None:
            raise ValueError("closed certificates carry ts_closed")
        return self

    @property
    def seq(self) -> int:
        return self.wrapper.seq


class Signature(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    signer: str
    value: str


class Certificate(BaseModel):
    """``Cert(payload; Sig...)`` with one or two party signatures."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    payload: CertPayload
    signatures: tuple[Signature, ...] = Field(..., min_length=1, max_length=2)

    @property
    def tid(self) -> str:
        return self.payload.tid

    @property
    def seq(self) -> int:
        return self.payload.seq

    @property
    def signers(self) -> frozenset[str]:
        return frozenset(signature.signer for signature in self.signatures)

    @property
    def dual_signed(self) -> bool:
        return len(self.signers) == 2

    @property
    def kind(self) -> CertKind:
        state = self.payload.state
        if state is TransState.INIT:
            return CertKind.INIT
        if state is TransState.INITED:
            return CertKind.INITED
        if state is TransState.OPEN:
            return CertKind.OPENED if self.dual_signed else CertKind.OPEN
        return CertKind.CLOSED if self.dual_signed else CertKind.CLOSE_REQUEST

    def signed_by(self, party: Party) -> bool:
        return party.value in self.signers

    def verify(self, keys: KeyDirectory) -> bool:
        """Every signature is distinct and valid over the canonical payload."""
        if len(self.signers) != len(self.signatures):
            return False
        return all(keys.verify(item.signer, self.payload, item.value) for item in self.signatures)

    def countersign(self, key: SigningKey) -> "Certificate":
        signature = Signature(signer=key.owner, value=key.sign(self.payload))
        return self.model_copy(update={"signatures": (*self.signatures, signature)})

    def encode(self) -> bytes:
        return canonical_bytes(self)

    def key(self) -> bytes:
        """ActionMT key: the digest of the full certificate bytes."""
        return digest_of(self)


def issue(payload: CertPayload, key: SigningKey) -> Certificate:
    return Certificate(payload=payload, signatures=(Signature(signer=key.owner, value=key.sign(payload)),))


__all__ = ["CERTIFIED_STATES", "CertPayload", "Certificate", "Signature", "issue", "tid_of"]
