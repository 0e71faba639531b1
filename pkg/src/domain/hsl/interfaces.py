"""Declarative contract interface files (``<source>.iface``)."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from src.core.models import SourceLanguage

from .diagnostics import HslSyntaxError
from .types import candidate_types

LOGGER = logging.getLogger(__name__)

INTERFACE_SUFFIX = ".iface"

_HEADER = re.compile(r"^contract\s+(?P<name>[A-Za-z_]\w*)\s+lang=(?P<lang>\S+)(?:\s+chains=(?P<chains>\S+))?$")
_VAR = re.compile(r"^var\s+(?:(?P<private>private)\s+)?(?P<name>[A-Za-z_]\w*)\s*:\s*(?P<type>.+)$")
_FN = re.compile(r"^fn\s+(?P<name>[A-Za-z_]\w*)\s*\((?P<params>.*)\)$")
_PARAM = re.compile(r"^(?P<name>[A-Za-z_]\w*)\s*:\s*(?P<type>.+)$")


@dataclass(frozen=True)
class StateVar:
    name: str
    native_type: str
    public: bool = True


@dataclass(frozen=True)
class Param:
    name: str
    native_type: str


@dataclass(frozen=True)
class Method:
    name: str
    params: tuple[Param, ...]


@dataclass(frozen=True)
class ContractInterface:
    name: str
    language: SourceLanguage
    state_vars: tuple[StateVar, ...]
    methods: tuple[Method, ...]
    chains: tuple[str, ...] = field(default=())
    source_file: str | None = None

    def state_var(self, name: str) -> StateVar | None:
        return next((var for var in self.state_vars if var.name == name), None)

    def method(self, name: str) -> Method | None:
        return next((method for method in self.methods if method.name == name), None)

    def serves(self, chain: str) -> bool:
        return not self.chains or chain in self.chains


def _fail(code: str, message: str, line: int, file: str) -> HslSyntaxError:
    return HslSyntaxError(code, message, line=line, column=1, file=file)


def _split_params(raw: str, line: int, file: str) -> tuple[Param, ...]:
    if not raw.strip():
        return ()
    params: list[Param] = []
    depth = 0
    current = ""
    pieces: list[str] = []
    for char in raw:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        if char == "," and depth == 0:
            pieces.append(current)
            current = ""
            continue
        current += char
    pieces.append(current)
    for piece in pieces:
        match = _PARAM.match(piece.strip())
        if not match:
            raise _fail("E_MALFORMED_INTERFACE", f"bad parameter {piece.strip()!r}", line, file)
        params.append(Param(match["name"], match["type"].strip()))
    return tuple(params)


def parse_contract_interface(text: str, *, file: str = "<iface>") -> ContractInterface:
    """Parse one interface declaration; native types are kept verbatim."""
    header: re.Match[str] | None = None
    language: SourceLanguage | None = None
    state_vars: list[StateVar] = []
    methods: list[Method] = []
    seen: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _HEADER.match(line)
            if header is None:
                raise _fail("E_MALFORMED_INTERFACE", f"expected contract header, got {line!r}", number, file)
            try:
                language = SourceLanguage(header["lang"])
            except ValueError as exc:
                raise _fail("E_UNKNOWN_LANGUAGE", f"unknown language tag {header['lang']!r}", number, file) from exc
            continue
        assert language is not None
        var = _VAR.match(line)
        fn = _FN.match(line)
        if var:
            name, native = var["name"], var["type"].strip()
            member: StateVar | Method = StateVar(name, native, public=var["private"] is None)
            natives = [native]
        elif fn:
            name = fn["name"]
            params = _split_params(fn["params"], number, file)
            if len({param.name for param in params}) != len(params):
                raise _fail("E_DUPLICATE_MEMBER", f"duplicate parameter in {name}", number, file)
            member = Method(name, params)
            natives = [param.native_type for param in params]
        else:
            raise _fail("E_MALFORMED_INTERFACE", f"unrecognized declaration {line!r}", number, file)
        if name in seen:
            raise _fail("E_DUPLICATE_MEMBER", f"{name} declared twice", number, file)
        seen.add(name)
        for native in natives:
            candidate_types(language, native)
        if isinstance(member, StateVar):
            state_vars.append(member)
        else:
            methods.append(member)
    if header is None or language is None:
        raise _fail("E_MALFORMED_INTERFACE", "missing contract header", 1, file)
    chains = tuple(header["chains"].split(",")) if header["chains"] else ()
    return ContractInterface(
        name=header["name"],
        language=language,
        state_vars=tuple(state_vars),
        methods=tuple(methods),
        chains=chains,
    )


def load_interfaces(directory: Path, files: Iterable[str]) -> list[ContractInterface]:
    """Load ``<file>.iface`` for every imported source present in ``directory``.

    Missing files are skipped here; validation reports them as missing imports.
    """
    loaded: list[ContractInterface] = []
    for name in files:
        path = directory / f"{name}{INTERFACE_SUFFIX}"
        if not path.exists():
            LOGGER.debug("interface file %s not found", path)
            continue
        interface = parse_contract_interface(path.read_text(encoding="utf-8"), file=path.name)
        loaded.append(replace(interface, source_file=name))
    return loaded


__all__ = [
    "INTERFACE_SUFFIX",
    "ContractInterface",
    "Method",
    "Param",
    "StateVar",
    "load_interfaces",
    "parse_contract_interface",
]
