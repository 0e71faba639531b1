from __future__ import annotations

import pytest

from src.core.models import SourceLanguage, UnifiedType
from src.domain.hsl import HslTypeError, candidate_types, is_ambiguous, map_type

T = UnifiedType

TABLE = [
    ("solidity", "bool", T.BOOLEAN),
    ("solidity", "uint", T.NUMERIC),
    ("solidity", "int256", T.NUMERIC),
    ("solidity", "address", T.ADDRESS),
    ("solidity", "string", T.STRING),
    ("solidity", "uint8[]", T.ARRAY),
    ("solidity", "bytes32", T.ARRAY),
    ("solidity", "mapping(address => uint)", T.MAP),
    ("solidity", "struct", T.STRUCT),
    ("solidity", "enum", T.FUNCTION),
    ("solidity", "Contract", T.CONTRACT),
    ("vyper", "decimal", T.NUMERIC),
    ("vyper", "int128", T.NUMERIC),
    ("vyper", "timestamp", T.NUMERIC),
    ("vyper", "string[32]", T.STRING),
    ("vyper", "map(address, uint256)", T.MAP),
    ("vyper", "def", T.FUNCTION),
    ("vyper", "file", T.CONTRACT),
    ("go", "uintptr", T.NUMERIC),
    ("go", "float64", T.NUMERIC),
    ("go", "int64", T.NUMERIC),
    ("go", "[]byte", T.ARRAY),
    ("go", "[4]int", T.ARRAY),
    ("go", "map[string]int", T.MAP),
    ("go", "func", T.FUNCTION),
    ("go", "type", T.CONTRACT),
]


@pytest.mark.parametrize(("language", "native", "expected"), TABLE)
def test_unified_mapping(language: str, native: str, expected: UnifiedType) -> None:
    assert map_type(language, native) is expected


def test_go_string_is_ambiguous_and_resolved_by_context() -> None:
    assert candidate_types(SourceLanguage.GO, "string") == frozenset({T.ADDRESS, T.STRING})
    assert is_ambiguous("go", "string")
    assert map_type("go", "string", expected=T.ADDRESS) is T.ADDRESS
    assert map_type("go", "string") is T.STRING
    assert map_type("go", "string", expected=T.NUMERIC) is T.STRING


@pytest.mark.parametrize("language", ["solidity", "vyper"])
def test_only_go_string_is_ambiguous(language: str) -> None:
    for native in ("string", "address", "bool"):
        assert not is_ambiguous(language, native)


@pytest.mark.parametrize(("language", "native"), [("solidity", "float"), ("vyper", "uintptr"), ("go", "address")])
def test_unmapped_types(language: str, native: str) -> None:
    with pytest.raises(HslTypeError):
        map_type(language, native)
