"""On-chain executable transactions (T̃)."""
from __future__ import annotations

from functools import cached_property
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from src.core.utils import SigningKey, canonical_bytes, hex_digest


class ContractCall(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    method: str
    args: tuple[str, ...] = ()


class OnChainTransaction(BaseModel):
    """A signed transaction as submitted to a simulated chain.

    ``tx_id`` is the digest of every field except the signature.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    chain: str
    from_: str = Field(..., alias="from")
    to: str
    value: int = Field(0, ge=0)
    unit: str
    call: ContractCall | None = None
    nonce: int = Field(..., ge=0)
    signer: str
    memo: str = ""
    signature: str = ""

    def body(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True, exclude={"signature"})

    @cached_property
    def tx_id(self) -> str:
        return hex_digest(self.body())

    def signed(self, key: SigningKey) -> "OnChainTransaction":
        return self.model_copy(update={"signature": key.sign(self.body())})

    def encode(self) -> bytes:
        return canonical_bytes(self)


__all__ = ["ContractCall", "OnChainTransaction"]
