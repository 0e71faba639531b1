"""NSB block headers, status claims and the submission log."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from src.core.utils import canonical_bytes, digest_of
from src.domain.attestation import Signature

SubmissionKind = Literal["action", "status"]


@dataclass(frozen=True)
class NsbBlock:
    height: int
    prev: str
    tx_root: bytes
    action_root: bytes
    status_root: bytes
    action_keys: tuple[bytes, ...] = ()
    status_entries: tuple[tuple[str, int], ...] = ()

    def digest(self) -> bytes:
        return digest_of(
            {
                "height": self.height,
                "prev": self.prev,
                "tx_root": self.tx_root,
                "action_root": self.action_root,
                "status_root": self.status_root,
            }
        )


class StatusClaim(BaseModel):
    """``ClosureClaim(T~, [chain, StateRoot, TxRoot])`` for the block that included T~."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tx_id: str
    chain: str
    height: int = Field(..., ge=0)
    tx_root: str
    state_root: str
    tid: str | None = Field(None, description="session transaction this claim serves, for accounting")
    signatures: tuple[Signature, ...] = ()

    def body(self) -> dict[str, Any]:
        return self.model_dump(mode="json", include={"tx_id", "chain", "height", "tx_root", "state_root"})

    def encode(self) -> bytes:
        return canonical_bytes(self.body())


@dataclass(frozen=True)
class Submission:
    """One NSB transaction, as counted against the per-tid budget."""

    kind: SubmissionKind
    key: bytes
    tid: str | None
    submitter: str | None
    height: int

    def encode(self) -> bytes:
        return canonical_bytes({"kind": self.kind, "key": self.key})


__all__ = ["NsbBlock", "StatusClaim", "Submission", "SubmissionKind"]
