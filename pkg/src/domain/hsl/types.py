"""Mapping from language-native types onto the unified type system."""
from __future__ import annotations

import re
from typing import FrozenSet

from src.core.models import SourceLanguage, UnifiedType

from .diagnostics import HslTypeError

_T = UnifiedType

_SOLIDITY: dict[str, FrozenSet[UnifiedType]] = {
    "bool": frozenset({_T.BOOLEAN}),
    "int": frozenset({_T.NUMERIC}),
    "uint": frozenset({_T.NUMERIC}),
    "address": frozenset({_T.ADDRESS}),
    "string": frozenset({_T.STRING}),
    "array": frozenset({_T.ARRAY}),
    "bytes": frozenset({_T.ARRAY}),
    "mapping": frozenset({_T.MAP}),
    "struct": frozenset({_T.STRUCT}),
    "function": frozenset({_T.FUNCTION}),
    "enum": frozenset({_T.FUNCTION}),
    "contract": frozenset({_T.CONTRACT}),
}

VYPER_UNIT_TYPES: FrozenSet[str] = frozenset({"wei_value", "timestamp", "timedelta"})

_VYPER: dict[str, FrozenSet[UnifiedType]] = {
    "bool": frozenset({_T.BOOLEAN}),
    "int128": frozenset({_T.NUMERIC}),
    "uint256": frozenset({_T.NUMERIC}),
    "decimal": frozenset({_T.NUMERIC}),
    **{unit: frozenset({_T.NUMERIC}) for unit in VYPER_UNIT_TYPES},
    "address": frozenset({_T.ADDRESS}),
    "string": frozenset({_T.STRING}),
    "array": frozenset({_T.ARRAY}),
    "bytes": frozenset({_T.ARRAY}),
    "map": frozenset({_T.MAP}),
    "struct": frozenset({_T.STRUCT}),
    "def": frozenset({_T.FUNCTION}),
    "file": frozenset({_T.CONTRACT}),
}

_GO: dict[str, FrozenSet[UnifiedType]] = {
    "bool": frozenset({_T.BOOLEAN}),
    "int": frozenset({_T.NUMERIC}),
    "uint": frozenset({_T.NUMERIC}),
    "uintptr": frozenset({_T.NUMERIC}),
    "float": frozenset({_T.NUMERIC}),
    "string": frozenset({_T.ADDRESS, _T.STRING}),
    "array": frozenset({_T.ARRAY}),
    "slice": frozenset({_T.ARRAY}),
    "map": frozenset({_T.MAP}),
    "struct": frozenset({_T.STRUCT}),
    "func": frozenset({_T.FUNCTION}),
    "type": frozenset({_T.CONTRACT}),
}

_TABLES: dict[SourceLanguage, dict[str, FrozenSet[UnifiedType]]] = {
    SourceLanguage.SOLIDITY: _SOLIDITY,
    SourceLanguage.VYPER: _VYPER,
    SourceLanguage.GO: _GO,
}

_SOL_WIDTHS = "|".join(str(bits) for bits in range(8, 257, 8))
_SOL_INT = re.compile(rf"^(u?int)({_SOL_WIDTHS})?$")
_SOL_FIXED_BYTES = re.compile(r"^bytes([1-9]|[12][0-9]|3[0-2])$")
_GO_INT = re.compile(r"^(u?int)(8|16|32|64)?$")
_GO_FLOAT = re.compile(r"^float(32|64)?$")


def _canonical(language: SourceLanguage, native: str) -> str:
    """Fold sized and parameterized spellings onto a table row."""
    text = native.strip()
    if language is SourceLanguage.SOLIDITY:
        if text.endswith("]"):
            return "array"
        if text.startswith("mapping("):
            return "mapping"
        if _SOL_FIXED_BYTES.match(text):
            return "bytes"
        if text in {"Contract", "contract"}:
            return "contract"
        match = _SOL_INT.match(text)
        if match:
            return match.group(1)
        return text
    if language is SourceLanguage.VYPER:
        if text.startswith(("string[", "String[")):
            return "string"
        if text.startswith(("bytes[", "Bytes[")) or text == "bytes32":
            return "bytes"
        if text.startswith(("map(", "HashMap[")):
            return "map"
        if text.endswith("]"):
            return "array"
        return text
    if text.startswith("[]"):
        return "slice"
    if text.startswith("["):
        return "array"
    if text.startswith("map["):
        return "map"
    if _GO_FLOAT.match(text):
        return "float"
    match = _GO_INT.match(text)
    if match:
        return match.group(1)
    return text


def candidate_types(language: SourceLanguage | str, native: str) -> FrozenSet[UnifiedType]:
    """Every unified kind the native type may denote; a singleton except Go ``string``."""
    lang = SourceLanguage(language)
    row = _TABLES[lang].get(_canonical(lang, native))
    if row is None:
        raise HslTypeError(
            "E_UNMAPPED_TYPE",
            f"{lang.value} type {native!r} has no unified mapping",
            details={"language": lang.value, "native_type": native},
        )
    return row


def is_ambiguous(language: SourceLanguage | str, native: str) -> bool:
    return len(candidate_types(language, native)) > 1


def map_type(
    language: SourceLanguage | str,
    native: str,
    *,
    expected: UnifiedType | None = None,
) -> UnifiedType:
    """Return the unified kind for ``native``.

    Go ``string`` resolves to Address when the usage context expects an
    address and to String otherwise.
    """
    candidates = candidate_types(language, native)
    if len(candidates) == 1:
        (only,) = candidates
        return only
    if expected is not None and expected in candidates:
        return expected
    return UnifiedType.STRING


__all__ = ["VYPER_UNIT_TYPES", "candidate_types", "is_ambiguous", "map_type"]
