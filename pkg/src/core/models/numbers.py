"""Decimal helpers shared by wire models."""
from __future__ import annotations

from decimal import Decimal
from typing import Annotated

from pydantic import PlainSerializer


def format_decimal(value: Decimal) -> str:
    return format(value.normalize(), "f")


Rate = Annotated[Decimal, PlainSerializer(format_decimal, return_type=str, when_used="json")]
"""A decimal exchange or conversion rate, serialized without exponent."""


def integral(value: Decimal) -> int | None:
    """Return ``value`` as an int when it has no fractional part."""
    if value != value.to_integral_value():
        return None
    return int(value)
