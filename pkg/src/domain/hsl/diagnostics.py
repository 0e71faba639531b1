"""Diagnostics and errors raised by the HSL frontend."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from src.core.errors import UipError


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int = 0
    column: int = 0
    file: str = "<hsl>"
    severity: Literal["ERROR", "WARNING"] = "ERROR"

    def format(self) -> str:
        return f"{self.severity} {self.code} {self.file}:{self.line}:{self.column} {self.message}"


@dataclass(frozen=True)
class HslSyntaxError(UipError):
    """Grammar violation with a source position."""

    line: int = 0
    column: int = 0
    file: str = "<hsl>"

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(self.code, self.message, self.line, self.column, self.file)


@dataclass(frozen=True)
class HslSemanticError(UipError):
    """Carries every violation found by :func:`validate`, not just the first."""

    diagnostics: tuple[Diagnostic, ...] = field(default=())

    @property
    def codes(self) -> list[str]:
        return [diagnostic.code for diagnostic in self.diagnostics]

    def format(self) -> str:
        return "\n".join(diagnostic.format() for diagnostic in self.diagnostics)


class HslTypeError(UipError):
    """Raised when a native type has no unified mapping."""
