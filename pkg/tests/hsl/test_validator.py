from __future__ import annotations

from dataclasses import replace

import networkx as nx
import pytest

from src.core.models import UnifiedType
from src.domain.hsl import (
    ContractInterface,
    HslProgram,
    HslSemanticError,
    parse_contract_interface,
    parse_hsl,
    validate,
)


def _codes(source: str, interfaces: list[ContractInterface]) -> list[str]:
    program = parse_hsl(source)
    with pytest.raises(HslSemanticError) as excinfo:
        validate(program, interfaces)
    return excinfo.value.codes


def test_option_program_is_valid(option_program: HslProgram, option_interfaces: list[ContractInterface]) -> None:
    validated = validate(option_program, option_interfaces)
    assert validated.order == ("op1", "op2", "op3", "op4")
    assert validated.edges == (("op1", "op2"), ("op1", "op4"), ("op2", "op3"))
    assert nx.is_directed_acyclic_graph(validated.graph())
    assert validated.contracts["c2"].source_file == "option.vy"
    assert validated.contracts["c3"].source_file == "option.go"
    price = validated.resolved_args["op4"][1]
    assert price.unified is UnifiedType.NUMERIC
    assert (price.kind, price.contract, price.var, price.source_op) == ("state", "c1", "StrikePrice", "op1")
    assert validated.resolved_args["op3"][0].value == "10"
    assert validated.deadlines["op2"].kind == "default"


def test_validate_collects_every_violation(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("c2.CashSettle(10, c1.StrikePrice)", 'c2.CashSettle("ten", c1.Missing)')
    source = source.replace("from a1 to a2", "from c1 to a2")
    codes = _codes(source, option_interfaces)
    assert "E_TYPE_MISMATCH" in codes
    assert "E_UNKNOWN_STATE_VAR" in codes
    assert "E_NOT_AN_ACCOUNT" in codes


def test_reverse_constraint_reports_cycle(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    codes = _codes(option_source + "op2 before op1\n", option_interfaces)
    assert "E_TEMPORAL_CYCLE" in codes
    assert "E_TEMPORAL_CONFLICT" in codes


def test_longer_cycle(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    codes = _codes(option_source + "op3 before op4; op4 before op2\n", option_interfaces)
    assert codes.count("E_TEMPORAL_CYCLE") == 1
    assert "E_TEMPORAL_CONFLICT" not in codes


def test_method_return_value_is_unverifiable(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("c2.CashSettle(10, c1.StrikePrice)", "c2.CashSettle(10, c1.GetStrikePrice())")
    assert _codes(source, option_interfaces) == ["E_UNVERIFIABLE_ARGUMENT"]


def test_private_state_is_unverifiable(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("c3.CashSettle(5, c1.StrikePrice)", "c3.CashSettle(5, c2.Writer)")
    assert "E_UNVERIFIABLE_ARGUMENT" in _codes(source, option_interfaces)


def test_state_without_upstream_producer(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("op1 before op2, op4; op3 after op2", "op1 before op2; op3 after op2")
    assert _codes(source, option_interfaces) == ["E_UNANCHORED_STATE"]


def test_dangling_references(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("using a3", "using a9").replace("op4 deadline 20 mins", "op9 deadline 20 mins")
    codes = _codes(source, option_interfaces)
    assert codes.count("E_DANGLING_REFERENCE") == 2


def test_duplicate_names(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("account a3 =", "account a2 =").replace("op op4", "op op3")
    codes = _codes(source, option_interfaces)
    assert "E_DUPLICATE_ENTITY" in codes
    assert "E_DUPLICATE_OPERATION" in codes


def test_arity_and_unknown_method(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    source = option_source.replace("c3.CashSettle(5, c1.StrikePrice)", "c3.CashSettle(5)")
    source = source.replace("c1.GetStrikePrice()", "c1.Quote()")
    codes = _codes(source, option_interfaces)
    assert "E_ARITY" in codes
    assert "E_UNKNOWN_METHOD" in codes


def test_payment_units(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    assert "E_UNIT_MISMATCH" in _codes(option_source.replace("payment 50 xcoin", "payment 50 zcoin"), option_interfaces)
    assert "E_EXCHANGE_MISMATCH" in _codes(option_source.replace("as 0.5 ycoin", "as 0.5 zcoin"), option_interfaces)
    no_unit = option_source.replace("Account(0x47a1a2, 0, ycoin)", "Account(0x47a1a2)")
    assert "E_MISSING_UNIT" in _codes(no_unit, option_interfaces)


def test_missing_import_and_ambiguous_contract(
    option_program: HslProgram, option_interfaces: list[ContractInterface]
) -> None:
    without_go = [i for i in option_interfaces if i.source_file != "option.go"]
    with pytest.raises(HslSemanticError) as excinfo:
        validate(option_program, without_go)
    assert "E_MISSING_IMPORT" in excinfo.value.codes
    assert "E_MISSING_INTERFACE" in excinfo.value.codes

    unscoped = [replace(i, chains=()) for i in option_interfaces]
    with pytest.raises(HslSemanticError) as excinfo:
        validate(option_program, unscoped)
    assert excinfo.value.codes.count("E_AMBIGUOUS_CONTRACT") == 2


def test_diagnostics_are_formatted(option_source: str, option_interfaces: list[ContractInterface]) -> None:
    program = parse_hsl(option_source.replace("using a3", "using a9"))
    with pytest.raises(HslSemanticError) as excinfo:
        validate(program, option_interfaces, file="option.hsl")
    assert excinfo.value.format() == "ERROR E_DANGLING_REFERENCE option.hsl:17:1 op4: undefined invoker a9"


def test_go_string_parameter_resolves_by_context() -> None:
    registry = parse_contract_interface(
        "contract Registry lang=go\nvar Owner: string\nfn Bind(who: string, label: string)\n"
    )
    registry = replace(registry, source_file="registry.go")
    program = parse_hsl(
        'import ("registry.go")\n'
        "account a = ChainX::Account(0x01, 1, xcoin)\n"
        "contract r = ChainX::Registry(0x02)\n"
        'op bind invocation r.Bind(a, "alice") using a\n'
    )
    validated = validate(program, [registry])
    who, label = validated.resolved_args["bind"]
    assert who.unified is UnifiedType.ADDRESS and who.value == "0x01"
    assert label.unified is UnifiedType.STRING
    assert {w.code for w in validated.warnings} == {"W_GO_STRING_AMBIGUOUS"}


def test_option_program_has_no_warnings(option_program: HslProgram, option_interfaces: list[ContractInterface]) -> None:
    assert validate(option_program, option_interfaces).warnings == ()
