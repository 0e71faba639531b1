"""Structured error hierarchy shared by every protocol module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class UipError(Exception):
    """Base error carrying structured metadata for callers and reports."""

    code: str
    message: str
    details: dict[str, Any] | None = field(default=None)

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.code}: {self.message}"

    def to_payload(self) -> dict[str, object]:
        """Return the JSON payload defined by the error contract."""

        payload: dict[str, object] = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class MerkleError(UipError):
    """Raised on invalid tree construction or proof requests."""


class CompileError(UipError):
    """Raised when a validated program cannot be lowered into a Tdg."""


class ChainError(UipError):
    """Raised by the simulated blockchains."""


class NsbError(UipError):
    """Raised by the network status blockchain."""


class IscError(UipError):
    """Raised by the insurance arbitrator; aborts leave state untouched."""


class PartyError(UipError):
    """Raised by party handlers on precondition failures."""


class NetsimError(UipError):
    """Raised by the discrete-event bus."""


class ScenarioError(UipError):
    """Raised when a scenario or fixture cannot be loaded or validated."""


class ConfigError(UipError):
    """Raised when protocol configuration is invalid."""
