"""Settlement rules: deadline verification, dirty transactions and the accountability tree."""
from __future__ import annotations

from typing import Mapping

from src.core.errors import IscError
from src.core.models import Party, TransState
from src.domain.compiler import Tdg, TransactionWrapper

from .state import TxRecord


def fresh(ts: int | None, height: int, delta: int) -> bool:
    """``ts`` is not in the future and at most ``delta`` NSB blocks old."""
    return ts is not None and 0 <= height - ts <= delta


def _by_seq(st: Mapping[str, TxRecord]) -> dict[int, TxRecord]:
    return {record.seq: record for record in st.values()}


def deadline_verify(record: TxRecord, st: Mapping[str, TxRecord], tdg: Tdg, *, session_start: int) -> bool:
    """Closed within ``deadline_blocks`` of its anchor.

    The anchor is the latest precondition ts_closed, or ``session_start`` for roots.
    """
    if record.state < TransState.CLOSED:
        raise IscError("E_NOT_CLOSED", f"T{record.seq} is {record.state.value}, not closed")
    records = _by_seq(st)
    preds = tdg.predecessors(record.seq)
    for pred in preds:
        upstream = records[pred]
        if upstream.state < TransState.CLOSED:
            raise IscError(
                "E_MISSING_TIMESTAMP",
                f"T{record.seq} precondition T{pred} has no closing timestamp",
                details={"seq": record.seq, "pred": pred},
            )
    anchor = max((records[pred].ts_closed for pred in preds), default=session_start)
    return record.ts_closed - anchor <= record.wrapper.meta.deadline_blocks


def dirty_trans(tdg: Tdg, st: Mapping[str, TxRecord]) -> frozenset[str]:
    """Eligible transactions (every precondition correct) whose own state is not correct."""
    records = _by_seq(st)
    dirty: set[str] = set()
    for record in records.values():
        eligible = all(records[pred].state is TransState.CORRECT for pred in tdg.predecessors(record.seq))
        if eligible and record.state is not TransState.CORRECT:
            dirty.add(record.tid)
    return frozenset(dirty)


def responsible_party(state: TransState, wrapper: TransactionWrapper) -> Party:
    """Who is held accountable for a dirty transaction stalled at ``state``."""
    if state in (TransState.OPEN, TransState.OPENED, TransState.CLOSED):
        return wrapper.originator
    if state is TransState.INITED:
        return wrapper.destination
    if state is TransState.INIT:
        return Party.CLIENT
    if state is TransState.UNKNOWN:
        return Party.VES
    raise IscError("E_NOT_DIRTY", f"T{wrapper.seq} is correct; nobody is accountable")


__all__ = ["deadline_verify", "dirty_trans", "fresh", "responsible_party"]
