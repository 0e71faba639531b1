from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path

import networkx as nx
import pytest

from src.core.errors import CompileError
from src.core.models import Party, SourceLanguage
from src.domain.compiler import (
    InvocationPayload,
    PaymentPayload,
    Tdg,
    VesConfig,
    compile_program,
    deadline_to_blocks,
)
from src.domain.hsl import ContractInterface, DeadlineSpec, ValidatedProgram, parse_hsl, validate

GOLDEN = Path(__file__).resolve().parents[1] / "golden" / "option_tdg.json"

SAME_CHAIN = """
import ("none.sol")
account a = ChainX::Account(0x01, 10, xcoin)
account b = ChainX::Account(0x02, 0, xcoin)
op pay payment 5 xcoin from a to b with 1 xcoin as 1 xcoin
"""


NONE_SOL = ContractInterface(
    name="None", language=SourceLanguage.SOLIDITY, state_vars=(), methods=(), source_file="none.sol"
)


def _bare(text: str) -> ValidatedProgram:
    return validate(parse_hsl(text), [NONE_SOL])


@pytest.mark.golden
def test_option_tdg_matches_golden(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    tdg = compile_program(option_validated, ves_config)
    assert json.loads(tdg.to_json()) == json.loads(GOLDEN.read_text(encoding="utf-8"))


def test_option_tdg_shape(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    tdg = compile_program(option_validated, ves_config)
    assert len(tdg) == 5
    kinds = [w.meta.payload.kind for w in tdg.wrappers]
    assert kinds == ["invocation", "payment", "payment", "invocation", "invocation"]
    t1 = tdg.wrapper(1).meta.payload
    assert isinstance(t1, InvocationPayload) and t1.method == "GetStrikePrice"
    t3 = tdg.wrapper(3)
    assert isinstance(t3.meta.payload, PaymentPayload)
    assert (t3.meta.payload.value, t3.meta.payload.unit, t3.meta.chain) == (25, "ycoin", "ChainY")
    assert tdg.successors(1) == (2, 3, 5)
    assert tdg.predecessors(4) == (2, 3)
    assert [s.seq for s in tdg.wrapper(4).meta.state_proof_slots] == [1]
    assert [s.seq for s in tdg.wrapper(5).meta.state_proof_slots] == [1]
    assert [w.meta.deadline_blocks for w in tdg.wrappers] == [10, 30, 30, 30, 120]


def test_party_attribution(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    tdg = compile_program(option_validated, ves_config)
    assert [(w.originator, w.destination) for w in tdg.wrappers] == [
        (Party.CLIENT, Party.VES),
        (Party.CLIENT, Party.VES),
        (Party.VES, Party.CLIENT),
        (Party.CLIENT, Party.VES),
        (Party.CLIENT, Party.VES),
    ]


def test_value_conservation(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    tdg = compile_program(option_validated, ves_config)
    payer, payee = tdg.wrapper(2).meta.payload, tdg.wrapper(3).meta.payload
    assert isinstance(payer, PaymentPayload) and isinstance(payee, PaymentPayload)
    assert Decimal(payer.value) * Decimal("0.5") == payee.value
    assert tdg.wrapper(2).meta.amt == tdg.wrapper(3).meta.amt == 50


def test_precedence_soundness(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    tdg = compile_program(option_validated, ves_config)
    closure = nx.transitive_closure_dag(tdg.graph())
    by_op: dict[str, list[int]] = {}
    for wrapper in tdg.wrappers:
        by_op.setdefault(wrapper.meta.op, []).append(wrapper.seq)
    for before, after in option_validated.edges:
        for pred in by_op[before]:
            for succ in by_op[after]:
                assert closure.has_edge(pred, succ)


def test_compilation_is_deterministic(option_validated: ValidatedProgram, ves_config: VesConfig) -> None:
    first = compile_program(option_validated, ves_config).to_json()
    second = compile_program(option_validated, ves_config).to_json()
    assert first == second
    assert Tdg.from_json(first).to_json() == first


def test_same_chain_payment(ves_config: VesConfig) -> None:
    tdg = compile_program(_bare(SAME_CHAIN), ves_config)
    assert len(tdg) == 1
    assert tdg.edges == ()


def test_fee_allowance_is_added(ves_config: VesConfig) -> None:
    tdg = compile_program(_bare(SAME_CHAIN), ves_config.model_copy(update={"fee_allowance": 3}))
    assert tdg.wrapper(1).meta.amt == 8


@pytest.mark.parametrize(
    ("update", "code"),
    [
        ({"reachable_chains": frozenset({"ChainX", "ChainY", "ChainN"})}, "E_UNREACHABLE_CHAIN"),
        ({"relay_accounts": {"ChainX": "0x5e1a00"}}, "E_MISSING_RELAY"),
        ({"rates": {"xcoin": 1}}, "E_MISSING_RATE"),
    ],
)
def test_compile_errors(
    option_validated: ValidatedProgram, ves_config: VesConfig, update: dict[str, object], code: str
) -> None:
    with pytest.raises(CompileError) as excinfo:
        compile_program(option_validated, ves_config.model_copy(update=update))
    assert excinfo.value.code == code


@pytest.mark.parametrize(
    ("spec", "expected"),
    [
        (DeadlineSpec(kind="blocks", value=10), 10),
        (DeadlineSpec(kind="default"), 30),
        (DeadlineSpec(kind="time", value=90, unit="secs"), 9),
        (DeadlineSpec(kind="time", value=20, unit="mins"), 120),
        (DeadlineSpec(kind="time", value=1, unit="hours"), 360),
        (DeadlineSpec(kind="time", value=1, unit="secs"), 1),
    ],
)
def test_deadline_to_blocks(spec: DeadlineSpec, expected: int, ves_config: VesConfig) -> None:
    assert deadline_to_blocks(spec, ves_config) == expected


def test_non_positive_deadline(ves_config: VesConfig) -> None:
    with pytest.raises(CompileError):
        deadline_to_blocks(DeadlineSpec(kind="blocks", value=0), ves_config)
