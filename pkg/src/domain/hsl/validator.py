"""Semantic validation: entity resolution, argument compatibility and verifiability, dependency DAG."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping

import networkx as nx

from src.core.models import UnifiedType
from src.core.utils import log_event

from .ast import (
    AccountDef,
    Arg,
    CallArg,
    ContractDef,
    DeadlineSpec,
    EntityArg,
    HslProgram,
    InvocationOp,
    Location,
    NumberArg,
    Operation,
    PaymentOp,
    StateVarArg,
    StringArg,
)
from .diagnostics import Diagnostic, HslSemanticError, HslTypeError
from .interfaces import ContractInterface, Param
from .types import candidate_types

LOGGER = logging.getLogger(__name__)

DEFAULT_DEADLINE = DeadlineSpec(kind="default")


@dataclass(frozen=True)
class ResolvedArg:
    """An invocation argument after type resolution.

    ``kind`` is ``literal`` for constants and addresses, ``state`` for an
    upstream state reference produced by ``source_op``.
    """

    param: str
    unified: UnifiedType
    kind: Literal["literal", "state"]
    value: str | None = None
    contract: str | None = None
    var: str | None = None
    source_op: str | None = None


@dataclass(frozen=True)
class ValidatedProgram:
    program: HslProgram
    contracts: Mapping[str, ContractInterface]
    resolved_args: Mapping[str, tuple[ResolvedArg, ...]]
    edges: tuple[tuple[str, str], ...]
    deadlines: Mapping[str, DeadlineSpec]
    warnings: tuple[Diagnostic, ...] = field(default=())

    @property
    def order(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.program.operations)

    def operation(self, name: str) -> Operation:
        return next(op for op in self.program.operations if op.name == name)

    def account(self, name: str) -> AccountDef:
        return next(acct for acct in self.program.accounts if acct.name == name)

    def contract(self, name: str) -> ContractDef:
        return next(contract for contract in self.program.contracts if contract.name == name)

    def graph(self) -> "nx.DiGraph[str]":
        graph: nx.DiGraph[str] = nx.DiGraph()
        graph.add_nodes_from(self.order)
        graph.add_edges_from(self.edges)
        return graph


class _Collector:
    def __init__(self, file: str) -> None:
        self.file = file
        self.errors: list[Diagnostic] = []
        self.warnings: list[Diagnostic] = []

    def error(self, code: str, message: str, loc: Location) -> None:
        self.errors.append(Diagnostic(code, message, loc.line, loc.column, self.file))

    def warn(self, code: str, message: str, loc: Location) -> None:
        self.warnings.append(Diagnostic(code, message, loc.line, loc.column, self.file, severity="WARNING"))


def _resolve_contracts(
    program: HslProgram,
    interfaces: list[ContractInterface],
    sink: _Collector,
) -> dict[str, ContractInterface]:
    imported = set(program.import_files)
    for statement in program.imports:
        for name in statement.files:
            if not any(iface.source_file == name for iface in interfaces):
                sink.error("E_MISSING_IMPORT", f"no interface supplied for import {name!r}", statement.loc)
    visible = [iface for iface in interfaces if iface.source_file is None or iface.source_file in imported]
    resolved: dict[str, ContractInterface] = {}
    for contract in program.contracts:
        if contract.extra_args:
            sink.error(
                "E_BAD_CONSTRUCTOR",
                f"contract {contract.name} takes only an address",
                contract.loc,
            )
        matches = [iface for iface in visible if iface.name == contract.interface and iface.serves(contract.chain)]
        if not matches:
            sink.error(
                "E_MISSING_INTERFACE",
                f"no imported interface {contract.interface} for {contract.name} on {contract.chain}",
                contract.loc,
            )
        elif len(matches) > 1:
            sources = ", ".join(sorted(str(iface.source_file) for iface in matches))
            sink.error(
                "E_AMBIGUOUS_CONTRACT",
                f"{contract.interface} on {contract.chain} is declared by several imports ({sources})",
                contract.loc,
            )
        else:
            resolved[contract.name] = matches[0]
    return resolved


def _check_entities(program: HslProgram, sink: _Collector) -> None:
    counts = Counter(entity.name for entity in program.entities)
    reported: set[str] = set()
    for entity in program.entities:
        if counts[entity.name] > 1 and entity.name not in reported:
            reported.add(entity.name)
            sink.error("E_DUPLICATE_ENTITY", f"entity {entity.name} defined {counts[entity.name]} times", entity.loc)
    for account in program.accounts:
        if account.constructor != "Account":
            sink.error(
                "E_BAD_CONSTRUCTOR",
                f"account {account.name} must use Account(...), got {account.constructor}",
                account.loc,
            )


def _check_payment(op: PaymentOp, accounts: Mapping[str, AccountDef], contracts: set[str], sink: _Collector) -> None:
    parties: list[AccountDef] = []
    for role, name in (("sender", op.sender), ("receiver", op.receiver)):
        if name in contracts:
            sink.error("E_NOT_AN_ACCOUNT", f"{op.name}: {role} {name} is a contract", op.loc)
        elif name not in accounts:
            sink.error("E_DANGLING_REFERENCE", f"{op.name}: undefined {role} {name}", op.loc)
        else:
            parties.append(accounts[name])
    for coin in (op.amount, op.rate_from, op.rate_to):
        if coin.amount <= 0:
            sink.error("E_NON_POSITIVE_AMOUNT", f"{op.name}: amount {coin.amount} {coin.unit} must be positive", op.loc)
    if len(parties) != 2:
        return
    sender, receiver = parties
    for account in (sender, receiver):
        if account.unit is None:
            sink.error("E_MISSING_UNIT", f"{op.name}: account {account.name} declares no unit", op.loc)
    if sender.unit is not None and op.amount.unit != sender.unit:
        sink.error(
            "E_UNIT_MISMATCH",
            f"{op.name}: pays {op.amount.unit} from {sender.name} holding {sender.unit}",
            op.loc,
        )
    if (sender.unit is not None and op.rate_from.unit != sender.unit) or (
        receiver.unit is not None and op.rate_to.unit != receiver.unit
    ):
        sink.error(
            "E_EXCHANGE_MISMATCH",
            f"{op.name}: exchange {op.rate_from.unit}->{op.rate_to.unit} does not match "
            f"{sender.unit}->{receiver.unit}",
            op.loc,
        )


def _arg_candidates(
    op: InvocationOp,
    arg: Arg,
    entities: Mapping[str, AccountDef | ContractDef],
    interfaces: Mapping[str, ContractInterface],
    sink: _Collector,
) -> frozenset[UnifiedType] | None:
    if isinstance(arg, NumberArg):
        return frozenset({UnifiedType.NUMERIC})
    if isinstance(arg, StringArg):
        return frozenset({UnifiedType.STRING})
    if isinstance(arg, CallArg):
        sink.error(
            "E_UNVERIFIABLE_ARGUMENT",
            f"{op.name}: return value of {arg.entity}.{arg.method}() is not persistent state",
            op.loc,
        )
        return None
    if isinstance(arg, EntityArg):
        if arg.name not in entities:
            sink.error("E_DANGLING_REFERENCE", f"{op.name}: undefined entity {arg.name}", op.loc)
            return None
        return frozenset({UnifiedType.ADDRESS})
    assert isinstance(arg, StateVarArg)
    entity = entities.get(arg.entity)
    if entity is None:
        sink.error("E_DANGLING_REFERENCE", f"{op.name}: undefined entity {arg.entity}", op.loc)
        return None
    if not isinstance(entity, ContractDef):
        sink.error("E_NOT_A_CONTRACT", f"{op.name}: {arg.entity} is an account and has no state", op.loc)
        return None
    interface = interfaces.get(arg.entity)
    if interface is None:
        return None
    var = interface.state_var(arg.var)
    if var is None:
        sink.error("E_UNKNOWN_STATE_VAR", f"{op.name}: {interface.name} has no state variable {arg.var}", op.loc)
        return None
    if not var.public:
        sink.error(
            "E_UNVERIFIABLE_ARGUMENT",
            f"{op.name}: {arg.entity}.{arg.var} is private and cannot be proven",
            op.loc,
        )
        return None
    try:
        return candidate_types(interface.language, var.native_type)
    except HslTypeError as exc:
        sink.error(exc.code, f"{op.name}: {exc.message}", op.loc)
        return None


def _literal_value(arg: Arg, entities: Mapping[str, AccountDef | ContractDef]) -> str | None:
    if isinstance(arg, NumberArg):
        return arg.text
    if isinstance(arg, StringArg):
        return arg.value
    if isinstance(arg, EntityArg):
        return entities[arg.name].address
    return None


def _check_invocation(
    op: InvocationOp,
    entities: Mapping[str, AccountDef | ContractDef],
    interfaces: Mapping[str, ContractInterface],
    sink: _Collector,
) -> tuple[ResolvedArg, ...] | None:
    invoker = entities.get(op.invoker)
    if invoker is None:
        sink.error("E_DANGLING_REFERENCE", f"{op.name}: undefined invoker {op.invoker}", op.loc)
    elif not isinstance(invoker, AccountDef):
        sink.error("E_NOT_AN_ACCOUNT", f"{op.name}: invoker {op.invoker} is a contract", op.loc)
    receiver = entities.get(op.receiver)
    if receiver is None:
        sink.error("E_DANGLING_REFERENCE", f"{op.name}: undefined contract {op.receiver}", op.loc)
        return None
    if not isinstance(receiver, ContractDef):
        sink.error("E_NOT_A_CONTRACT", f"{op.name}: {op.receiver} is an account", op.loc)
        return None
    interface = interfaces.get(op.receiver)
    if interface is None:
        return None
    method = interface.method(op.method)
    if method is None:
        sink.error("E_UNKNOWN_METHOD", f"{op.name}: {interface.name} has no method {op.method}", op.loc)
        return None
    if len(method.params) != len(op.args):
        sink.error(
            "E_ARITY",
            f"{op.name}: {interface.name}.{method.name} takes {len(method.params)} argument(s), got {len(op.args)}",
            op.loc,
        )
        return None
    resolved: list[ResolvedArg] = []
    for param, arg in zip(method.params, op.args):
        item = _resolve_arg(op, interface, param, arg, entities, interfaces, sink)
        if item is not None:
            resolved.append(item)
    return tuple(resolved) if len(resolved) == len(op.args) else None


def _resolve_arg(
    op: InvocationOp,
    interface: ContractInterface,
    param: Param,
    arg: Arg,
    entities: Mapping[str, AccountDef | ContractDef],
    interfaces: Mapping[str, ContractInterface],
    sink: _Collector,
) -> ResolvedArg | None:
    try:
        wanted = candidate_types(interface.language, param.native_type)
    except HslTypeError as exc:
        sink.error(exc.code, f"{op.name}: {exc.message}", op.loc)
        return None
    offered = _arg_candidates(op, arg, entities, interfaces, sink)
    if offered is None:
        return None
    common = wanted & offered
    if not common:
        sink.error(
            "E_TYPE_MISMATCH",
            f"{op.name}: parameter {param.name} expects {'/'.join(sorted(t.value for t in wanted))}, "
            f"argument is {'/'.join(sorted(t.value for t in offered))}",
            op.loc,
        )
        return None
    if len(common) == 1:
        (unified,) = common
    else:
        unified = UnifiedType.ADDRESS if isinstance(arg, EntityArg) else UnifiedType.STRING
    if len(wanted) > 1 or len(offered) > 1:
        sink.warn(
            "W_GO_STRING_AMBIGUOUS",
            f"{op.name}: Go string at parameter {param.name} resolved as {unified.value}",
            op.loc,
        )
    if isinstance(arg, StateVarArg):
        return ResolvedArg(param=param.name, unified=unified, kind="state", contract=arg.entity, var=arg.var)
    return ResolvedArg(param=param.name, unified=unified, kind="literal", value=_literal_value(arg, entities))


def _build_edges(program: HslProgram, op_names: set[str], sink: _Collector) -> list[tuple[str, str]]:
    edges: list[tuple[str, str]] = []
    for constraint in program.temporal:
        missing = [name for name in (constraint.before, constraint.after) if name not in op_names]
        if missing:
            for name in missing:
                sink.error(
                    "E_DANGLING_REFERENCE", f"temporal constraint names undefined operation {name}", constraint.loc
                )
            continue
        if constraint.before == constraint.after:
            sink.error("E_TEMPORAL_CYCLE", f"{constraint.before} cannot precede itself", constraint.loc)
            continue
        pair = (constraint.before, constraint.after)
        if (pair[1], pair[0]) in edges:
            sink.error(
                "E_TEMPORAL_CONFLICT",
                f"{pair[0]} before {pair[1]} contradicts {pair[1]} before {pair[0]}",
                constraint.loc,
            )
        if pair not in edges:
            edges.append(pair)
    return edges


def _check_cycles(program: HslProgram, edges: list[tuple[str, str]], sink: _Collector) -> "nx.DiGraph[str] | None":
    graph: nx.DiGraph[str] = nx.DiGraph()
    graph.add_nodes_from(op.name for op in program.operations)
    graph.add_edges_from(edges)
    if nx.is_directed_acyclic_graph(graph):
        return graph
    position = {op.name: index for index, op in enumerate(program.operations)}
    components = [sorted(component, key=position.__getitem__) for component in nx.strongly_connected_components(graph)]
    for component in sorted(components, key=lambda names: position[names[0]]):
        if len(component) < 2:
            continue
        loc = next(op.loc for op in program.operations if op.name == component[0])
        sink.error("E_TEMPORAL_CYCLE", "cyclic temporal constraints among " + ", ".join(component), loc)
    return None


def _check_deadlines(program: HslProgram, op_names: set[str], sink: _Collector) -> dict[str, DeadlineSpec]:
    deadlines: dict[str, DeadlineSpec] = {}
    for assignment in program.deadlines:
        if assignment.op not in op_names:
            sink.error("E_DANGLING_REFERENCE", f"deadline names undefined operation {assignment.op}", assignment.loc)
            continue
        if assignment.op in deadlines:
            sink.error("E_DUPLICATE_DEADLINE", f"{assignment.op} has more than one deadline", assignment.loc)
            continue
        if assignment.spec.value is not None and assignment.spec.value <= 0:
            sink.error("E_NON_POSITIVE_DEADLINE", f"{assignment.op}: deadline must be positive", assignment.loc)
            continue
        deadlines[assignment.op] = assignment.spec
    return {op.name: deadlines.get(op.name, DEFAULT_DEADLINE) for op in program.operations}


def _anchor_state(
    program: HslProgram,
    graph: "nx.DiGraph[str]",
    resolved_args: dict[str, tuple[ResolvedArg, ...]],
    sink: _Collector,
) -> None:
    position = {op.name: index for index, op in enumerate(program.operations)}
    by_name = {op.name: op for op in program.operations}
    receivers = {op.name: op.receiver for op in program.operations if isinstance(op, InvocationOp)}
    for op_name, args in list(resolved_args.items()):
        anchored: list[ResolvedArg] = []
        for arg in args:
            if arg.kind != "state":
                anchored.append(arg)
                continue
            producers = [name for name in nx.ancestors(graph, op_name) if receivers.get(name) == arg.contract]
            if not producers:
                sink.error(
                    "E_UNANCHORED_STATE",
                    f"{op_name}: {arg.contract}.{arg.var} is not produced by any preceding invocation"
                    f" on {arg.contract}",
                    by_name[op_name].loc,
                )
                anchored.append(arg)
                continue
            source = max(producers, key=position.__getitem__)
            anchored.append(
                ResolvedArg(
                    param=arg.param,
                    unified=arg.unified,
                    kind="state",
                    contract=arg.contract,
                    var=arg.var,
                    source_op=source,
                )
            )
        resolved_args[op_name] = tuple(anchored)


def validate(
    program: HslProgram,
    interfaces: Iterable[ContractInterface],
    *,
    file: str = "<hsl>",
) -> ValidatedProgram:
    """Check ``program`` against the supplied interfaces.

    Raises :class:`HslSemanticError` holding every violation found.
    """
    sink = _Collector(file)
    supplied = list(interfaces)
    resolved_contracts = _resolve_contracts(program, supplied, sink)
    _check_entities(program, sink)

    entities: dict[str, AccountDef | ContractDef] = {}
    for entity in program.entities:
        entities.setdefault(entity.name, entity)
    accounts = {name: entity for name, entity in entities.items() if isinstance(entity, AccountDef)}
    contract_names = {name for name, entity in entities.items() if isinstance(entity, ContractDef)}

    op_counts = Counter(op.name for op in program.operations)
    reported: set[str] = set()
    resolved_args: dict[str, tuple[ResolvedArg, ...]] = {}
    for op in program.operations:
        if op_counts[op.name] > 1 and op.name not in reported:
            reported.add(op.name)
            sink.error("E_DUPLICATE_OPERATION", f"operation {op.name} defined {op_counts[op.name]} times", op.loc)
        if isinstance(op, PaymentOp):
            _check_payment(op, accounts, contract_names, sink)
        else:
            args = _check_invocation(op, entities, resolved_contracts, sink)
            if args is not None:
                resolved_args[op.name] = args

    op_names = set(op_counts)
    edges = _build_edges(program, op_names, sink)
    graph = _check_cycles(program, edges, sink)
    deadlines = _check_deadlines(program, op_names, sink)
    if graph is not None:
        _anchor_state(program, graph, resolved_args, sink)

    if sink.errors:
        log_event(LOGGER, "hsl_rejected", level=logging.DEBUG, file=file, codes=[d.code for d in sink.errors])
        raise HslSemanticError(
            "E_VALIDATION",
            f"{len(sink.errors)} semantic violation(s)",
            diagnostics=tuple(sink.errors),
        )
    validated = ValidatedProgram(
        program=program,
        contracts=resolved_contracts,
        resolved_args=resolved_args,
        edges=tuple(edges),
        deadlines=deadlines,
        warnings=tuple(sink.warnings),
    )
    log_event(
        LOGGER,
        "hsl_validated",
        level=logging.DEBUG,
        file=file,
        operations=len(program.operations),
        edges=len(edges),
        warnings=len(sink.warnings),
    )
    return validated


__all__ = ["DEFAULT_DEADLINE", "ResolvedArg", "ValidatedProgram", "validate"]
