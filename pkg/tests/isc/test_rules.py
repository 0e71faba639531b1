from __future__ import annotations

import itertools
import random

import pytest

from src.core.errors import IscError
from src.core.models import Party, TransState
from src.domain.attestation import tid_of
from src.domain.compiler import Tdg
from src.domain.isc import TxRecord, deadline_verify, dirty_trans, fresh, responsible_party

from .conftest import dag_tdg, transfer

DIAMOND = ((1, 2), (1, 3), (2, 4), (3, 4))
ALL_STATES = tuple(TransState)


def _records(tdg: Tdg, states: dict[int, TransState], closed_at: dict[int, int] | None = None) -> dict[str, TxRecord]:
    closed_at = closed_at or {}
    records = {}
    for wrapper in tdg.wrappers:
        tid = tid_of(wrapper)
        records[tid] = TxRecord(
            tid=tid, wrapper=wrapper, state=states[wrapper.seq], ts_closed=closed_at.get(wrapper.seq, 0)
        )
    return records


def _seqs(records: dict[str, TxRecord], tids: frozenset[str]) -> set[int]:
    return {records[tid].seq for tid in tids}


@pytest.mark.parametrize(
    ("ts", "delta", "expected"),
    [(10, 0, True), (9, 0, False), (5, 5, True), (4, 5, False), (11, 5, False), (None, 5, False)],
)
def test_fresh_window(ts: int | None, delta: int, expected: bool) -> None:
    assert fresh(ts, 10, delta) is expected


@pytest.mark.parametrize(("closed", "expected"), [(18, True), (20, True), (21, False)])
def test_deadline_from_session_start(closed: int, expected: bool) -> None:
    tdg = dag_tdg(1, ())
    records = _records(tdg, {1: TransState.CLOSED}, {1: closed})
    record = next(iter(records.values()))
    assert deadline_verify(record, records, tdg, session_start=10) is expected


def test_deadline_anchored_on_latest_precondition() -> None:
    tdg = dag_tdg(3, ((1, 3), (2, 3)))
    records = _records(tdg, {seq: TransState.CLOSED for seq in (1, 2, 3)}, {1: 4, 2: 12, 3: 22})
    last = next(record for record in records.values() if record.seq == 3)
    assert deadline_verify(last, records, tdg, session_start=0)
    last.ts_closed = 23
    assert not deadline_verify(last, records, tdg, session_start=0)


def test_deadline_needs_closed_preconditions() -> None:
    tdg = dag_tdg(2, ((1, 2),))
    records = _records(tdg, {1: TransState.OPENED, 2: TransState.CLOSED}, {2: 5})
    second = next(record for record in records.values() if record.seq == 2)
    with pytest.raises(IscError) as excinfo:
        deadline_verify(second, records, tdg, session_start=0)
    assert excinfo.value.code == "E_MISSING_TIMESTAMP"
    first = next(record for record in records.values() if record.seq == 1)
    with pytest.raises(IscError) as excinfo:
        deadline_verify(first, records, tdg, session_start=0)
    assert excinfo.value.code == "E_NOT_CLOSED"


def test_nothing_dirty_when_all_correct() -> None:
    tdg = dag_tdg(4, DIAMOND)
    assert dirty_trans(tdg, _records(tdg, {seq: TransState.CORRECT for seq in range(1, 5)})) == frozenset()


def test_stuck_root_is_the_only_dirty_transaction() -> None:
    tdg = dag_tdg(4, DIAMOND)
    records = _records(tdg, {1: TransState.OPEN, 2: TransState.UNKNOWN, 3: TransState.UNKNOWN, 4: TransState.UNKNOWN})
    assert _seqs(records, dirty_trans(tdg, records)) == {1}


def test_diamond_exhaustively() -> None:
    tdg = dag_tdg(4, DIAMOND)
    for combo in itertools.product(ALL_STATES, repeat=4):
        states = dict(zip(range(1, 5), combo))
        records = _records(tdg, states)
        dirty = _seqs(records, dirty_trans(tdg, records))
        assert (not dirty) == all(state is TransState.CORRECT for state in combo)
        for seq in dirty:
            assert states[seq] is not TransState.CORRECT
            assert all(states[pred] is TransState.CORRECT for pred in tdg.predecessors(seq))
            responsible_party(states[seq], tdg.wrapper(seq))


@pytest.mark.parametrize("seed", range(10))
def test_random_dag_dirty_set(seed: int) -> None:
    rng = random.Random(seed)
    edges = tuple((a, b) for a in range(1, 11) for b in range(a + 1, 11) if rng.random() < 0.25)
    tdg = dag_tdg(10, edges)
    states = {seq: rng.choice(ALL_STATES) for seq in range(1, 11)}
    records = _records(tdg, states)
    dirty = _seqs(records, dirty_trans(tdg, records))
    for seq in range(1, 11):
        eligible = all(states[pred] is TransState.CORRECT for pred in tdg.predecessors(seq))
        assert (seq in dirty) == (eligible and states[seq] is not TransState.CORRECT)


@pytest.mark.parametrize(
    ("state", "origin", "expected"),
    [
        (TransState.UNKNOWN, Party.CLIENT, Party.VES),
        (TransState.INIT, Party.VES, Party.CLIENT),
        (TransState.INITED, Party.CLIENT, Party.VES),
        (TransState.INITED, Party.VES, Party.CLIENT),
        (TransState.OPEN, Party.VES, Party.VES),
        (TransState.OPENED, Party.CLIENT, Party.CLIENT),
        (TransState.CLOSED, Party.CLIENT, Party.CLIENT),
    ],
)
def test_responsible_party(state: TransState, origin: Party, expected: Party) -> None:
    assert responsible_party(state, transfer(1, origin, 5)) is expected


def test_correct_transactions_have_nobody_responsible() -> None:
    with pytest.raises(IscError) as excinfo:
        responsible_party(TransState.CORRECT, transfer(1, Party.CLIENT, 5))
    assert excinfo.value.code == "E_NOT_DIRTY"
