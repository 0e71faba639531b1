"""Abstract syntax of HSL programs."""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Literal, Union


@dataclass(frozen=True)
class Location:
    line: int
    column: int


@dataclass(frozen=True)
class Import:
    files: tuple[str, ...]
    loc: Location


@dataclass(frozen=True)
class AccountDef:
    name: str
    chain: str
    address: str
    balance: Decimal | None
    unit: str | None
    loc: Location
    constructor: str = "Account"


@dataclass(frozen=True)
class ContractDef:
    name: str
    chain: str
    interface: str
    address: str
    loc: Location
    extra_args: tuple[str, ...] = ()


EntityDef = Union[AccountDef, ContractDef]


@dataclass(frozen=True)
class Coin:
    amount: Decimal
    unit: str


@dataclass(frozen=True)
class NumberArg:
    value: Decimal
    text: str


@dataclass(frozen=True)
class StringArg:
    value: str


@dataclass(frozen=True)
class StateVarArg:
    entity: str
    var: str


@dataclass(frozen=True)
class EntityArg:
    name: str


@dataclass(frozen=True)
class CallArg:
    """``entity.method()``; parsed so validation can reject it."""

    entity: str
    method: str


Arg = Union[NumberArg, StringArg, StateVarArg, EntityArg, CallArg]


@dataclass(frozen=True)
class PaymentOp:
    name: str
    amount: Coin
    sender: str
    receiver: str
    rate_from: Coin
    rate_to: Coin
    loc: Location


@dataclass(frozen=True)
class InvocationOp:
    name: str
    receiver: str
    method: str
    args: tuple[Arg, ...]
    invoker: str
    loc: Location


Operation = Union[PaymentOp, InvocationOp]


@dataclass(frozen=True)
class TemporalConstraint:
    """Normalized edge: ``before`` runs ahead of ``after``."""

    before: str
    after: str
    relation: Literal["before", "after"]
    loc: Location


@dataclass(frozen=True)
class DeadlineSpec:
    kind: Literal["blocks", "default", "time"]
    value: int | None = None
    unit: str | None = None


@dataclass(frozen=True)
class DeadlineAssignment:
    op: str
    spec: DeadlineSpec
    loc: Location


@dataclass(frozen=True)
class HslProgram:
    source: str
    imports: tuple[Import, ...]
    accounts: tuple[AccountDef, ...]
    contracts: tuple[ContractDef, ...]
    operations: tuple[Operation, ...]
    temporal: tuple[TemporalConstraint, ...]
    deadlines: tuple[DeadlineAssignment, ...]

    @property
    def import_files(self) -> tuple[str, ...]:
        return tuple(name for statement in self.imports for name in statement.files)

    @property
    def entities(self) -> tuple[EntityDef, ...]:
        ordered: list[EntityDef] = [*self.accounts, *self.contracts]
        ordered.sort(key=lambda entity: (entity.loc.line, entity.loc.column))
        return tuple(ordered)
