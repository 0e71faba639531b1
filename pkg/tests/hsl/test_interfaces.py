from __future__ import annotations

from pathlib import Path

import pytest

from src.core.models import SourceLanguage
from src.domain.hsl import HslSyntaxError, HslTypeError, load_interfaces, parse_contract_interface

BROKER = """
contract Broker lang=solidity
var StrikePrice: uint
fn GetStrikePrice()
"""


def test_broker_interface() -> None:
    iface = parse_contract_interface(BROKER)
    assert iface.name == "Broker"
    assert iface.language is SourceLanguage.SOLIDITY
    assert [(v.name, v.native_type) for v in iface.state_vars] == [("StrikePrice", "uint")]
    assert [m.name for m in iface.methods] == ["GetStrikePrice"]
    assert iface.methods[0].params == ()
    assert iface.chains == ()


def test_params_and_private_vars_are_kept_verbatim() -> None:
    iface = parse_contract_interface(
        "contract Vault lang=vyper chains=ChainY,ChainZ\n"
        "var private Owner: address\n"
        "fn Put(amount: uint256, note: string[64])\n"
    )
    assert iface.chains == ("ChainY", "ChainZ")
    assert iface.state_vars[0].public is False
    assert [(p.name, p.native_type) for p in iface.methods[0].params] == [("amount", "uint256"), ("note", "string[64]")]


def test_duplicate_method_is_rejected() -> None:
    with pytest.raises(HslSyntaxError) as excinfo:
        parse_contract_interface(BROKER + "fn GetStrikePrice()\n")
    assert excinfo.value.code == "E_DUPLICATE_MEMBER"


def test_unknown_language_is_rejected() -> None:
    with pytest.raises(HslSyntaxError) as excinfo:
        parse_contract_interface("contract Broker lang=java\n")
    assert excinfo.value.code == "E_UNKNOWN_LANGUAGE"


@pytest.mark.parametrize("text", ["", "var x: uint\n", "contract Broker lang=solidity\nvar x uint\n"])
def test_malformed_declarations(text: str) -> None:
    with pytest.raises(HslSyntaxError) as excinfo:
        parse_contract_interface(text)
    assert excinfo.value.code == "E_MALFORMED_INTERFACE"


def test_unmapped_native_type_is_rejected() -> None:
    with pytest.raises(HslTypeError) as excinfo:
        parse_contract_interface("contract Broker lang=solidity\nvar Price: float\n")
    assert excinfo.value.code == "E_UNMAPPED_TYPE"


def test_load_interfaces_sets_source_file(option_dir: Path) -> None:
    loaded = load_interfaces(option_dir, ["broker.sol", "option.vy", "missing.sol"])
    assert [(i.name, i.source_file) for i in loaded] == [("Broker", "broker.sol"), ("Option", "option.vy")]
