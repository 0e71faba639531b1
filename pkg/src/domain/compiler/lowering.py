"""Lower a validated HSL program into a VES-specific Tdg."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import ROUND_CEILING, Decimal

import networkx as nx

from src.core.errors import CompileError
from src.core.models import Party, integral
from src.core.utils import log_event
from src.domain.hsl import (
    AccountDef,
    DeadlineSpec,
    InvocationOp,
    PaymentOp,
    ValidatedProgram,
)

from .config import VesConfig
from .tdg import (
    AccountRef,
    ArgRef,
    InvocationPayload,
    PaymentPayload,
    SessionParams,
    StateProofSlot,
    Tdg,
    TransactionWrapper,
    WrapperMeta,
)

LOGGER = logging.getLogger(__name__)

_SECONDS = {"secs": 1, "mins": 60, "hours": 3600}


def deadline_to_blocks(spec: DeadlineSpec, config: VesConfig) -> int:
    """Convert a deadline clause into a number of NSB blocks, rounding time up."""
    if spec.kind == "default":
        blocks = config.default_deadline_blocks
    elif spec.kind == "blocks":
        blocks = int(spec.value or 0)
    else:
        seconds = Decimal(spec.value or 0) * _SECONDS[spec.unit or "mins"]
        blocks = int((seconds * config.blocks_per_minute / 60).to_integral_value(rounding=ROUND_CEILING))
    if blocks <= 0:
        raise CompileError(
            "E_NON_POSITIVE_DEADLINE",
            f"deadline {spec.kind} {spec.value or ''} converts to {blocks} blocks",
        )
    return blocks


@dataclass
class _Draft:
    """A wrapper before sequence numbers are assigned."""

    op: str
    leg: int
    order: int
    sender: AccountRef
    receiver: AccountRef
    chain: str
    payload: PaymentPayload | InvocationPayload
    amt: int
    rate: Decimal | None
    deadline_blocks: int
    state_refs: tuple[tuple[str, str, str], ...] = ()

    @property
    def key(self) -> tuple[str, int]:
        return (self.op, self.leg)


class _Lowering:
    def __init__(self, program: ValidatedProgram, config: VesConfig) -> None:
        self.program = program
        self.config = config
        self.drafts: list[_Draft] = []
        self.by_op: dict[str, list[_Draft]] = {}

    def account_ref(self, account: AccountDef) -> AccountRef:
        return AccountRef(
            chain=account.chain,
            address=account.address,
            name=account.name,
            owner=self.config.owner_of(account.name),
            kind="account",
        )

    def relay_ref(self, chain: str) -> AccountRef:
        address = self.config.relay_accounts.get(chain)
        if address is None:
            raise CompileError("E_MISSING_RELAY", f"no VES relay account on {chain}", details={"chain": chain})
        return AccountRef(chain=chain, address=address, name=f"relay@{chain}", owner=Party.VES, kind="relay")

    def require_reachable(self, chain: str, op: str) -> None:
        if chain not in self.config.reachable_chains:
            raise CompileError(
                "E_UNREACHABLE_CHAIN",
                f"{op}: {chain} is not reachable by the VES",
                details={"chain": chain, "op": op},
            )

    def to_isc_units(self, value: int, unit: str, op: str) -> tuple[int, Decimal]:
        rate = self.config.rate_of(unit)
        if rate is None:
            raise CompileError("E_MISSING_RATE", f"{op}: no ISC rate configured for {unit}", details={"unit": unit})
        converted = integral(Decimal(value) * rate)
        if converted is None:
            raise CompileError(
                "E_NON_INTEGRAL_AMOUNT",
                f"{op}: {value} {unit} is not a whole number of {self.config.isc_unit}",
            )
        return converted + self.config.fee_allowance, rate

    def add(self, draft: _Draft) -> None:
        self.drafts.append(draft)
        self.by_op.setdefault(draft.op, []).append(draft)

    def lower_payment(self, op: PaymentOp, order: int, deadline: int) -> None:
        sender = self.program.account(op.sender)
        receiver = self.program.account(op.receiver)
        for chain in (sender.chain, receiver.chain):
            self.require_reachable(chain, op.name)
        value = integral(op.amount.amount)
        if value is None:
            raise CompileError("E_NON_INTEGRAL_AMOUNT", f"{op.name}: {op.amount.amount} {op.amount.unit} is fractional")
        if sender.chain == receiver.chain:
            if sender.unit != receiver.unit:
                raise CompileError(
                    "E_UNIT_MISMATCH",
                    f"{op.name}: same-chain payment between {sender.unit} and {receiver.unit}",
                )
            amt, rate = self.to_isc_units(value, op.amount.unit, op.name)
            self.add(
                _Draft(
                    op=op.name,
                    leg=0,
                    order=order,
                    sender=self.account_ref(sender),
                    receiver=self.account_ref(receiver),
                    chain=sender.chain,
                    payload=PaymentPayload(value=value, unit=op.amount.unit),
                    amt=amt,
                    rate=rate,
                    deadline_blocks=deadline,
                )
            )
            return
        credited = integral(op.amount.amount * op.rate_to.amount / op.rate_from.amount)
        if credited is None or credited <= 0:
            raise CompileError(
                "E_NON_INTEGRAL_AMOUNT",
                f"{op.name}: {op.amount.amount} {op.amount.unit} converts to a fractional {op.rate_to.unit} amount",
            )
        payer_amt, payer_rate = self.to_isc_units(value, op.amount.unit, op.name)
        payee_amt, payee_rate = self.to_isc_units(credited, op.rate_to.unit, op.name)
        self.add(
            _Draft(
                op=op.name,
                leg=0,
                order=order,
                sender=self.account_ref(sender),
                receiver=self.relay_ref(sender.chain),
                chain=sender.chain,
                payload=PaymentPayload(value=value, unit=op.amount.unit),
                amt=payer_amt,
                rate=payer_rate,
                deadline_blocks=deadline,
            )
        )
        self.add(
            _Draft(
                op=op.name,
                leg=1,
                order=order,
                sender=self.relay_ref(receiver.chain),
                receiver=self.account_ref(receiver),
                chain=receiver.chain,
                payload=PaymentPayload(value=credited, unit=op.rate_to.unit),
                amt=payee_amt,
                rate=payee_rate,
                deadline_blocks=deadline,
            )
        )

    def lower_invocation(self, op: InvocationOp, order: int, deadline: int) -> None:
        invoker = self.program.account(op.invoker)
        contract = self.program.contract(op.receiver)
        interface = self.program.contracts[op.receiver]
        self.require_reachable(contract.chain, op.name)
        if invoker.chain != contract.chain:
            raise CompileError(
                "E_CHAIN_MISMATCH",
                f"{op.name}: invoker {invoker.name} lives on {invoker.chain}, contract on {contract.chain}",
            )
        state_refs = tuple(
            (arg.source_op or "", self.program.contract(arg.contract or "").address, arg.var or "")
            for arg in self.program.resolved_args.get(op.name, ())
            if arg.kind == "state"
        )
        self.add(
            _Draft(
                op=op.name,
                leg=0,
                order=order,
                sender=self.account_ref(invoker),
                receiver=AccountRef(
                    chain=contract.chain,
                    address=contract.address,
                    name=contract.name,
                    owner=None,
                    kind="contract",
                ),
                chain=contract.chain,
                payload=InvocationPayload(
                    contract=contract.address,
                    contract_name=contract.name,
                    interface=interface.name,
                    method=op.method,
                    args=(),
                ),
                amt=self.config.fee_allowance,
                rate=None,
                deadline_blocks=deadline,
                state_refs=state_refs,
            )
        )

    def run(self) -> Tdg:
        self.require_reachable(self.config.isc_chain, "session")
        for party in Party:
            if party not in self.config.refund_accounts:
                raise CompileError("E_MISSING_REFUND_ACCOUNT", f"no refund account for {party.value}")
        for order, name in enumerate(self.program.order):
            op = self.program.operation(name)
            deadline = deadline_to_blocks(self.program.deadlines[name], self.config)
            if isinstance(op, PaymentOp):
                self.lower_payment(op, order, deadline)
            else:
                self.lower_invocation(op, order, deadline)

        graph: nx.DiGraph[tuple[str, int]] = nx.DiGraph()
        graph.add_nodes_from(draft.key for draft in self.drafts)
        for legs in self.by_op.values():
            for first, second in zip(legs, legs[1:]):
                graph.add_edge(first.key, second.key)
        for before, after in self.program.edges:
            for pred in self.by_op[before]:
                for succ in self.by_op[after]:
                    graph.add_edge(pred.key, succ.key)
        drafts = {draft.key: draft for draft in self.drafts}
        ordered = list(nx.lexicographical_topological_sort(graph, key=lambda key: (drafts[key].order, key[1])))
        seq_of = {key: index for index, key in enumerate(ordered, start=1)}

        wrappers: list[TransactionWrapper] = []
        for key in ordered:
            draft = drafts[key]
            payload = draft.payload
            slots: list[StateProofSlot] = []
            if isinstance(payload, InvocationPayload):
                payload = payload.model_copy(update={"args": self._args(draft, seq_of)})
                for source_op, contract, var in draft.state_refs:
                    slot = StateProofSlot(seq=seq_of[(source_op, 0)], contract=contract, var=var)
                    if slot not in slots:
                        slots.append(slot)
            wrappers.append(
                TransactionWrapper(
                    from_=draft.sender,
                    to=draft.receiver,
                    seq=seq_of[key],
                    meta=WrapperMeta(
                        amt=draft.amt,
                        dst=self.config.refund_accounts[draft.sender.owner or Party.VES],
                        rate=draft.rate,
                        payload=payload,
                        state_proof_slots=tuple(slots),
                        deadline_blocks=draft.deadline_blocks,
                        chain=draft.chain,
                        op=draft.op,
                    ),
                )
            )
        edges = sorted((seq_of[pred], seq_of[succ]) for pred, succ in graph.edges)
        return Tdg(
            wrappers=tuple(wrappers),
            edges=tuple(edges),
            session=SessionParams(
                isc_chain=self.config.isc_chain,
                isc_unit=self.config.isc_unit,
                default_deadline_blocks=self.config.default_deadline_blocks,
                fee_allowance=self.config.fee_allowance,
            ),
        )

    def _args(self, draft: _Draft, seq_of: dict[tuple[str, int], int]) -> tuple[ArgRef, ...]:
        refs: list[ArgRef] = []
        for arg in self.program.resolved_args.get(draft.op, ()):
            if arg.kind == "state":
                refs.append(
                    ArgRef(
                        kind="state",
                        unified=arg.unified,
                        seq=seq_of[(arg.source_op or "", 0)],
                        contract=self.program.contract(arg.contract or "").address,
                        var=arg.var,
                    )
                )
            else:
                refs.append(ArgRef(kind="literal", unified=arg.unified, value=arg.value))
        return tuple(refs)


def compile_program(program: ValidatedProgram, config: VesConfig) -> Tdg:
    """Lower ``program`` into a Tdg for the VES described by ``config``."""
    tdg = _Lowering(program, config).run()
    log_event(
        LOGGER,
        "tdg_compiled",
        wrappers=len(tdg.wrappers),
        edges=len(tdg.edges),
        digest=tdg.digest().hex()[:16],
    )
    return tdg


__all__ = ["compile_program", "deadline_to_blocks"]
