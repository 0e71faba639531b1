"""Enumerations shared across the protocol stack."""
from __future__ import annotations

from enum import Enum
from typing import FrozenSet


class Party(str, Enum):
    """Session roles. The ISC and NSB peers sign as non-party actors."""

    VES = "ves"
    CLIENT = "client"

    @property
    def counterpart(self) -> "Party":
        return Party.CLIENT if self is Party.VES else Party.VES


class TransState(str, Enum):
    """Transaction lifecycle; declaration order is the promotion order."""

    UNKNOWN = "unknown"
    INIT = "init"
    INITED = "inited"
    OPEN = "open"
    OPENED = "opened"
    CLOSED = "closed"
    CORRECT = "correct"

    @property
    def rank(self) -> int:
        return _STATE_ORDER.index(self)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, TransState):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other: object) -> bool:
        if not isinstance(other, TransState):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, TransState):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, TransState):
            return NotImplemented
        return self.rank >= other.rank


_STATE_ORDER: tuple[TransState, ...] = tuple(TransState)


class CertKind(str, Enum):
    """The five stakeable certificate kinds plus the close request."""

    INIT = "i"
    INITED = "id"
    OPEN = "o"
    OPENED = "od"
    CLOSED = "c"
    CLOSE_REQUEST = "cr"

    @property
    def state(self) -> TransState:
        return _KIND_STATE[self]

    @property
    def dual_signed(self) -> bool:
        return self in DUAL_SIGNED_KINDS


_KIND_STATE: dict[CertKind, TransState] = {
    CertKind.INIT: TransState.INIT,
    CertKind.INITED: TransState.INITED,
    CertKind.OPEN: TransState.OPEN,
    CertKind.OPENED: TransState.OPENED,
    CertKind.CLOSED: TransState.CLOSED,
    CertKind.CLOSE_REQUEST: TransState.CLOSED,
}

DUAL_SIGNED_KINDS: FrozenSet[CertKind] = frozenset({CertKind.OPENED, CertKind.CLOSED})
"""Certificates the ISC accepts directly, without an NSB proof."""

STAKEABLE_KINDS: FrozenSet[CertKind] = frozenset(
    {CertKind.INIT, CertKind.INITED, CertKind.OPEN, CertKind.OPENED, CertKind.CLOSED}
)
"""Certificates an honest party may stake on the NSB ActionMT."""


class UnifiedType(str, Enum):
    """The nine elementary kinds of the unified type system."""

    BOOLEAN = "Boolean"
    NUMERIC = "Numeric"
    ADDRESS = "Address"
    STRING = "String"
    ARRAY = "Array"
    MAP = "Map"
    STRUCT = "Struct"
    FUNCTION = "Function"
    CONTRACT = "Contract"


class SourceLanguage(str, Enum):
    SOLIDITY = "solidity"
    VYPER = "vyper"
    GO = "go"


class StallClass(str, Enum):
    """Fault-matrix columns; CONTROL runs the unmodified scenario."""

    UNKNOWN = "unknown"
    INIT = "init"
    INITED = "inited"
    OPEN = "open"
    OPENED = "opened"
    CLOSED_LATE = "closed-late"
    CONTROL = "control"
