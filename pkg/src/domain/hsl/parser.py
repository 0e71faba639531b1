"""Lark grammar and transformer turning HSL text into an :class:`HslProgram`."""
from __future__ import annotations

import json
import logging
from decimal import Decimal, InvalidOperation
from functools import lru_cache
from typing import Any

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from src.core.utils import log_event

from .ast import (
    AccountDef,
    Arg,
    CallArg,
    Coin,
    ContractDef,
    DeadlineAssignment,
    DeadlineSpec,
    EntityArg,
    HslProgram,
    Import,
    InvocationOp,
    Location,
    NumberArg,
    Operation,
    PaymentOp,
    StateVarArg,
    StringArg,
    TemporalConstraint,
)
from .diagnostics import HslSyntaxError

LOGGER = logging.getLogger(__name__)

HSL_GRAMMAR = r"""
start: import_stmt+ entity_def+ op_def+ (dep | ";")*

import_stmt: "import" "(" STRING ("," STRING)* ")"

entity_def: ENTITY_KIND NAME "=" CHAIN "::" NAME "(" ADDRESS ("," ctor_value)* ")"
?ctor_value: NUMBER | NAME

op_def: "op" NAME "payment" coin "from" NAME "to" NAME "with" coin "as" coin  -> payment
      | "op" NAME "invocation" NAME "." NAME "(" (arg ("," arg)*)? ")" "using" NAME  -> invocation

coin: NUMBER NAME

arg: NUMBER                   -> number_arg
   | STRING                   -> string_arg
   | NAME "." NAME "(" ")"    -> call_arg
   | NAME "." NAME            -> state_arg
   | NAME                     -> entity_arg

dep: NAME "before" name_list        -> before
   | NAME "after" name_list         -> after
   | name_list "deadline" deadline_spec  -> deadline

name_list: NAME ("," NAME)*

deadline_spec: NUMBER BLOCKS     -> blocks_spec
             | "default"         -> default_spec
             | NUMBER TIME_UNIT  -> time_spec

ENTITY_KIND: "account" | "contract"
CHAIN: /Chain[A-Za-z0-9_]+/
ADDRESS: /0x[0-9a-fA-F]+/
BLOCKS: /blocks?\b/
TIME_UNIT: /(seconds|second|secs|sec|minutes|minute|mins|min|hours|hour)\b/
NAME: /[A-Za-z_][A-Za-z0-9_]*/
NUMBER: /-?[0-9]+(\.[0-9]+)?/
STRING: ESCAPED_STRING
COMMENT: /#[^\n]*/

%import common.ESCAPED_STRING
%import common.WS
%ignore WS
%ignore COMMENT
"""

_TIME_UNITS = {
    "sec": "secs", "secs": "secs", "second": "secs", "seconds": "secs",
    "min": "mins", "mins": "mins", "minute": "mins", "minutes": "mins",
    "hour": "hours", "hours": "hours",
}


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(HSL_GRAMMAR, parser="lalr", propagate_positions=True)


def _loc(meta: Any) -> Location:
    return Location(getattr(meta, "line", 0), getattr(meta, "column", 0))


def _token_loc(token: Token) -> Location:
    return Location(token.line or 0, token.column or 0)


def _decimal(token: Token) -> Decimal:
    try:
        return Decimal(str(token))
    except InvalidOperation as exc:  # pragma: no cover - the lexer already constrains NUMBER
        loc = _token_loc(token)
        raise HslSyntaxError("E_SYNTAX", f"bad number {token!s}", line=loc.line, column=loc.column) from exc


def _integer(token: Token) -> int:
    value = _decimal(token)
    if value != value.to_integral_value():
        raise HslSyntaxError(
            "E_SYNTAX",
            f"deadline must be an integer, got {token!s}",
            line=token.line or 0,
            column=token.column or 0,
        )
    return int(value)


@v_args(meta=True)
class _HslTransformer(Transformer[Token, Any]):
    def __init__(self, source: str) -> None:
        super().__init__()
        self._source = source

    def start(self, meta: Any, children: list[Any]) -> HslProgram:
        imports = tuple(child for child in children if isinstance(child, Import))
        accounts = tuple(child for child in children if isinstance(child, AccountDef))
        contracts = tuple(child for child in children if isinstance(child, ContractDef))
        operations: tuple[Operation, ...] = tuple(
            child for child in children if isinstance(child, (PaymentOp, InvocationOp))
        )
        temporal: list[TemporalConstraint] = []
        deadlines: list[DeadlineAssignment] = []
        for child in children:
            if isinstance(child, list):
                for item in child:
                    if isinstance(item, TemporalConstraint):
                        temporal.append(item)
                    elif isinstance(item, DeadlineAssignment):
                        deadlines.append(item)
        return HslProgram(
            source=self._source,
            imports=imports,
            accounts=accounts,
            contracts=contracts,
            operations=operations,
            temporal=tuple(temporal),
            deadlines=tuple(deadlines),
        )

    def import_stmt(self, meta: Any, children: list[Token]) -> Import:
        return Import(files=tuple(json.loads(str(token)) for token in children), loc=_loc(meta))

    def entity_def(self, meta: Any, children: list[Token]) -> AccountDef | ContractDef:
        kind, name, chain, constructor, address, *values = children
        loc = _loc(meta)
        if str(kind) == "account":
            balance: Decimal | None = None
            unit: str | None = None
            for value in values:
                if value.type == "NUMBER" and balance is None and unit is None:
                    balance = _decimal(value)
                elif value.type == "NAME" and unit is None:
                    unit = str(value)
                else:
                    raise HslSyntaxError(
                        "E_SYNTAX",
                        f"unexpected constructor argument {value!s} for account {name!s}",
                        line=value.line or 0,
                        column=value.column or 0,
                    )
            return AccountDef(
                name=str(name),
                chain=str(chain),
                address=str(address),
                balance=balance,
                unit=unit,
                loc=loc,
                constructor=str(constructor),
            )
        return ContractDef(
            name=str(name),
            chain=str(chain),
            interface=str(constructor),
            address=str(address),
            loc=loc,
            extra_args=tuple(str(value) for value in values),
        )

    def coin(self, meta: Any, children: list[Token]) -> Coin:
        amount, unit = children
        return Coin(amount=_decimal(amount), unit=str(unit))

    def payment(self, meta: Any, children: list[Any]) -> PaymentOp:
        name, amount, sender, receiver, rate_from, rate_to = children
        return PaymentOp(
            name=str(name),
            amount=amount,
            sender=str(sender),
            receiver=str(receiver),
            rate_from=rate_from,
            rate_to=rate_to,
            loc=_loc(meta),
        )

    def invocation(self, meta: Any, children: list[Any]) -> InvocationOp:
        name, receiver, method, *args, invoker = children
        return InvocationOp(
            name=str(name),
            receiver=str(receiver),
            method=str(method),
            args=tuple(args),
            invoker=str(invoker),
            loc=_loc(meta),
        )

    def number_arg(self, meta: Any, children: list[Token]) -> Arg:
        (token,) = children
        return NumberArg(value=_decimal(token), text=str(token))

    def string_arg(self, meta: Any, children: list[Token]) -> Arg:
        (token,) = children
        return StringArg(value=json.loads(str(token)))

    def call_arg(self, meta: Any, children: list[Token]) -> Arg:
        entity, method = children
        return CallArg(entity=str(entity), method=str(method))

    def state_arg(self, meta: Any, children: list[Token]) -> Arg:
        entity, var = children
        return StateVarArg(entity=str(entity), var=str(var))

    def entity_arg(self, meta: Any, children: list[Token]) -> Arg:
        (token,) = children
        return EntityArg(name=str(token))

    def name_list(self, meta: Any, children: list[Token]) -> list[Token]:
        return list(children)

    def before(self, meta: Any, children: list[Any]) -> list[TemporalConstraint]:
        head, names = children
        return [
            TemporalConstraint(before=str(head), after=str(other), relation="before", loc=_token_loc(other))
            for other in names
        ]

    def after(self, meta: Any, children: list[Any]) -> list[TemporalConstraint]:
        head, names = children
        return [
            TemporalConstraint(before=str(other), after=str(head), relation="after", loc=_token_loc(other))
            for other in names
        ]

    def deadline(self, meta: Any, children: list[Any]) -> list[DeadlineAssignment]:
        names, spec = children
        return [DeadlineAssignment(op=str(name), spec=spec, loc=_token_loc(name)) for name in names]

    def blocks_spec(self, meta: Any, children: list[Token]) -> DeadlineSpec:
        return DeadlineSpec(kind="blocks", value=_integer(children[0]))

    def default_spec(self, meta: Any, children: list[Token]) -> DeadlineSpec:
        return DeadlineSpec(kind="default")

    def time_spec(self, meta: Any, children: list[Token]) -> DeadlineSpec:
        value, unit = children
        return DeadlineSpec(kind="time", value=_integer(value), unit=_TIME_UNITS[str(unit)])


def _eof_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse_hsl(text: str, *, file: str = "<hsl>") -> HslProgram:
    """Parse HSL source text.

    Raises :class:`HslSyntaxError` with the offending line and column.
    """
    try:
        tree = _parser().parse(text)
    except UnexpectedEOF as exc:
        line, column = _eof_position(text)
        raise HslSyntaxError(
            "E_SYNTAX",
            f"unexpected end of input, expected one of {sorted(exc.expected)}",
            line=line,
            column=column,
            file=file,
        ) from exc
    except UnexpectedInput as exc:
        line, column = exc.line, exc.column
        if line is None or line < 0:
            line, column = _eof_position(text)
        raise HslSyntaxError(
            "E_SYNTAX",
            f"unexpected input at line {line} column {column}",
            details={"context": exc.get_context(text).strip()} if exc.pos_in_stream is not None else None,
            line=line,
            column=column,
            file=file,
        ) from exc
    try:
        program = _HslTransformer(text).transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, HslSyntaxError):
            raise HslSyntaxError(
                exc.orig_exc.code,
                exc.orig_exc.message,
                line=exc.orig_exc.line,
                column=exc.orig_exc.column,
                file=file,
            ) from exc.orig_exc
        raise
    assert isinstance(program, HslProgram)
    log_event(
        LOGGER,
        "hsl_parsed",
        level=logging.DEBUG,
        file=file,
        operations=len(program.operations),
        entities=len(program.accounts) + len(program.contracts),
    )
    return program


__all__ = ["HSL_GRAMMAR", "parse_hsl"]
