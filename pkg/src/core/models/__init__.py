"""Shared enumerations and wire-level number types."""
from __future__ import annotations

from .constants import (
    DUAL_SIGNED_KINDS,
    STAKEABLE_KINDS,
    CertKind,
    Party,
    SourceLanguage,
    StallClass,
    TransState,
    UnifiedType,
)
from .numbers import Rate, format_decimal, integral

__all__ = [
    "DUAL_SIGNED_KINDS",
    "STAKEABLE_KINDS",
    "CertKind",
    "Party",
    "Rate",
    "SourceLanguage",
    "StallClass",
    "TransState",
    "UnifiedType",
    "format_decimal",
    "integral",
]
