"""Transaction dependency graph: wrappers, precedence edges and serialization."""
from __future__ import annotations

from typing import Annotated, Literal, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from src.core.models import Party, Rate, UnifiedType
from src.core.utils import canonical_json, digest_of, pretty_json

AccountKind = Literal["account", "relay", "contract"]


class AccountRef(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    chain: str
    address: str
    name: str = Field(..., description="HSL entity name or relay label")
    owner: Party | None = Field(None, description="owning party; None for contracts")
    kind: AccountKind = "account"


class PaymentPayload(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["payment"] = "payment"
    value: int = Field(..., gt=0)
    unit: str


class ArgRef(BaseModel):
    """An invocation argument: a literal, or the state a prior wrapper left behind."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["literal", "state"]
    unified: UnifiedType
    value: str | None = None
    seq: int | None = None
    contract: str | None = None
    var: str | None = None


class InvocationPayload(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["invocation"] = "invocation"
    contract: str = Field(..., description="contract address")
    contract_name: str
    interface: str
    method: str
    args: tuple[ArgRef, ...] = ()


Payload = Annotated[Union[PaymentPayload, InvocationPayload], Field(discriminator="kind")]


class StateProofSlot(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seq: int = Field(..., ge=1, description="upstream wrapper whose resulting state is consumed")
    contract: str
    var: str


class WrapperMeta(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    amt: int = Field(..., ge=0, description="reversion value in ISC-chain units")
    dst: str = Field(..., description="reversion account on the ISC chain")
    rate: Rate | None = Field(None, description="ISC units per coin used for amt")
    payload: Payload
    state_proof_slots: tuple[StateProofSlot, ...] = ()
    deadline_blocks: int = Field(..., ge=1)
    chain: str
    op: str = Field(..., description="source HSL operation")


class TransactionWrapper(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    from_: AccountRef = Field(..., alias="from")
    to: AccountRef
    seq: int = Field(..., ge=1)
    meta: WrapperMeta

    @property
    def originator(self) -> Party:
        """The party that signs and posts the transaction."""
        assert self.from_.owner is not None
        return self.from_.owner

    @property
    def destination(self) -> Party:
        owner = self.to.owner
        if owner is not None and owner is not self.originator:
            return owner
        return self.originator.counterpart


class SessionParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    isc_chain: str
    isc_unit: str
    default_deadline_blocks: int
    fee_allowance: int = 0


class Tdg(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    wrappers: tuple[TransactionWrapper, ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    session: SessionParams

    def __len__(self) -> int:
        return len(self.wrappers)

    @property
    def seqs(self) -> tuple[int, ...]:
        return tuple(wrapper.seq for wrapper in self.wrappers)

    def wrapper(self, seq: int) -> TransactionWrapper:
        return self.wrappers[seq - 1]

    def predecessors(self, seq: int) -> tuple[int, ...]:
        return tuple(sorted(pred for pred, succ in self.edges if succ == seq))

    def successors(self, seq: int) -> tuple[int, ...]:
        return tuple(sorted(succ for pred, succ in self.edges if pred == seq))

    def graph(self) -> "nx.DiGraph[int]":
        graph: nx.DiGraph[int] = nx.DiGraph()
        graph.add_nodes_from(self.seqs)
        graph.add_edges_from(self.edges)
        return graph

    def ancestors(self, seq: int) -> frozenset[int]:
        return frozenset(nx.ancestors(self.graph(), seq))

    def wrappers_of(self, party: Party) -> tuple[TransactionWrapper, ...]:
        return tuple(wrapper for wrapper in self.wrappers if wrapper.originator is party)

    def to_json(self) -> str:
        return pretty_json(self)

    def canonical(self) -> str:
        return canonical_json(self)

    def digest(self) -> bytes:
        return digest_of(self)

    @classmethod
    def from_json(cls, text: str) -> "Tdg":
        return cls.model_validate_json(text)


__all__ = [
    "AccountRef",
    "ArgRef",
    "InvocationPayload",
    "Payload",
    "PaymentPayload",
    "SessionParams",
    "StateProofSlot",
    "Tdg",
    "TransactionWrapper",
    "WrapperMeta",
]
