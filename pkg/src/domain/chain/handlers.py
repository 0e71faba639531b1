"""Deterministic contract handlers registered by symbolic name."""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Callable, Mapping

from src.core.errors import ChainError
from src.core.models import format_decimal


class HandlerError(ChainError):
    """A handler refused the call; the transaction fails without effect."""


@dataclass(frozen=True)
class CallContext:
    method: str
    args: tuple[str, ...]
    caller: str
    value: int
    unit: str
    storage: Mapping[str, str]


ContractHandler = Callable[[CallContext], dict[str, str]]

HANDLERS: dict[str, ContractHandler] = {}


def register_handler(name: str) -> Callable[[ContractHandler], ContractHandler]:
    def decorator(handler: ContractHandler) -> ContractHandler:
        HANDLERS[name] = handler
        return handler

    return decorator


def _number(ctx: CallContext, index: int) -> Decimal:
    try:
        return Decimal(ctx.args[index])
    except IndexError as exc:
        raise HandlerError("E_HANDLER_ARITY", f"{ctx.method} expects argument {index + 1}") from exc
    except InvalidOperation as exc:
        raise HandlerError("E_HANDLER_ARGUMENT", f"{ctx.method}: {ctx.args[index]!r} is not numeric") from exc


def _stored(ctx: CallContext, var: str, default: str = "0") -> Decimal:
    return Decimal(ctx.storage.get(var, default))


def _unknown(ctx: CallContext) -> HandlerError:
    return HandlerError("E_UNKNOWN_METHOD", f"method {ctx.method} is not supported")


@register_handler("broker")
def broker(ctx: CallContext) -> dict[str, str]:
    """Price oracle: ``GetStrikePrice`` publishes the quoted price as ``StrikePrice``."""
    if ctx.method == "GetStrikePrice":
        return {"StrikePrice": ctx.storage.get("QuotedPrice", "42")}
    if ctx.method == "SetQuote":
        return {"QuotedPrice": format_decimal(_number(ctx, 0))}
    raise _unknown(ctx)


@register_handler("option")
def option(ctx: CallContext) -> dict[str, str]:
    if ctx.method != "CashSettle":
        raise _unknown(ctx)
    amount, price = _number(ctx, 0), _number(ctx, 1)
    if price <= 0:
        raise HandlerError("E_BAD_PRICE", f"strike price {price} must be positive")
    return {
        "Settled": format_decimal(_stored(ctx, "Settled") + amount * price),
        "LastPrice": format_decimal(price),
    }


@register_handler("vault")
def vault(ctx: CallContext) -> dict[str, str]:
    held = _stored(ctx, "Locked")
    if ctx.method == "Lock":
        return {"Locked": format_decimal(held + _number(ctx, 0)), "Holder": ctx.caller}
    if ctx.method == "Release":
        amount = _number(ctx, 0)
        if amount > held:
            raise HandlerError("E_VAULT_UNDERFLOW", f"cannot release {amount}, {held} locked")
        return {"Locked": format_decimal(held - amount)}
    raise _unknown(ctx)


@register_handler("region")
def region(ctx: CallContext) -> dict[str, str]:
    if ctx.method != "Tally":
        raise _unknown(ctx)
    votes = _number(ctx, 0)
    if votes < 0:
        raise HandlerError("E_BAD_TALLY", "vote counts cannot be negative")
    return {"Votes": format_decimal(_stored(ctx, "Votes") + votes)}


@register_handler("aggregator")
def aggregator(ctx: CallContext) -> dict[str, str]:
    if ctx.method != "Aggregate":
        raise _unknown(ctx)
    total = sum((_number(ctx, index) for index in range(len(ctx.args))), Decimal(0))
    decided = total >= _stored(ctx, "Quorum")
    return {"Total": format_decimal(total), "Decided": "1" if decided else "0"}


@register_handler("isc_escrow")
def isc_escrow(ctx: CallContext) -> dict[str, str]:
    """Records stake deposits per contract id and depositor."""
    if ctx.method != "StakeFund":
        raise _unknown(ctx)
    if not ctx.args:
        raise HandlerError("E_HANDLER_ARITY", "StakeFund expects a contract id")
    var = f"stake:{ctx.args[0]}:{ctx.caller}"
    return {var: format_decimal(_stored(ctx, var) + ctx.value)}


__all__ = ["HANDLERS", "CallContext", "ContractHandler", "HandlerError", "register_handler"]
