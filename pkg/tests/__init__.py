"""Test suite package marker for pytest utilities."""

from __future__ import annotations

__all__ = []
