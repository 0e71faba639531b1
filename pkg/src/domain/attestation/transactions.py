"""Computing the on-chain transaction T~ for a wrapper, and checking association."""
from __future__ import annotations

from typing import Mapping

from src.core.errors import PartyError
from src.domain.chain import ContractCall, OnChainTransaction
from src.domain.compiler import InvocationPayload, TransactionWrapper


def state_key(contract: str, var: str) -> str:
    return f"{contract}.{var}"


def consumed_keys(wrapper: TransactionWrapper) -> tuple[str, ...]:
    return tuple(state_key(slot.contract, slot.var) for slot in wrapper.meta.state_proof_slots)


def session_memo(sid: str, seq: int) -> str:
    return f"{sid}/{seq}"


def memo_session(memo: str) -> str:
    return memo.rsplit("/", 1)[0]


def build_transaction(wrapper: TransactionWrapper, *, sid: str, values: Mapping[str, str]) -> OnChainTransaction:
    """Deterministic T~: nonce is the wrapper seq, consumed state comes from ``values``.

    The result is unsigned; the originator signs it when posting.
    """
    payload = wrapper.meta.payload
    value, unit, call = 0, "", None
    if isinstance(payload, InvocationPayload):
        args: list[str] = []
        for arg in payload.args:
            if arg.kind == "literal":
                args.append(arg.value or "")
                continue
            assert arg.contract is not None and arg.var is not None
            key = state_key(arg.contract, arg.var)
            if key not in values:
                raise PartyError("E_UPSTREAM_UNKNOWN", f"T{wrapper.seq} consumes {key}, which is not proven yet")
            args.append(values[key])
        call = ContractCall(method=payload.method, args=tuple(args))
    else:
        value, unit = payload.value, payload.unit
    return OnChainTransaction(
        chain=wrapper.meta.chain,
        from_=wrapper.from_.address,
        to=wrapper.to.address,
        value=value,
        unit=unit,
        call=call,
        nonce=wrapper.seq,
        signer=wrapper.originator.value,
        memo=session_memo(sid, wrapper.seq),
    )


def associated(
    wrapper: TransactionWrapper, tx: OnChainTransaction, *, sid: str, values: Mapping[str, str]
) -> bool:
    """True when ``tx`` is exactly the T~ the wrapper yields over the proven ``values``."""
    try:
        expected = build_transaction(wrapper, sid=sid, values=values)
    except PartyError:
        return False
    return tx.body() == expected.body()


__all__ = [
    "associated",
    "build_transaction",
    "consumed_keys",
    "memo_session",
    "session_memo",
    "state_key",
]
