"""Ports shared by the protocol actors."""
from __future__ import annotations

from typing import Protocol


class ProtocolMetrics(Protocol):
    """Port for emitting protocol metrics."""

    def observe_nsb_submission(self, *, kind: str) -> None:
        """Count an NSB transaction (action staking or status claim)."""

    def observe_claim(self, *, outcome: str) -> None:
        """Count an ISC insurance claim by outcome."""

    def observe_message(self, *, event: str) -> None:
        """Count a bus event (send, deliver, drop)."""

    def observe_settlement(self, *, outcome: str) -> None:
        """Count ISC settlements by outcome."""

    def observe_chain_block(self, *, chain: str) -> None:
        """Count blocks appended per chain."""


class NullMetrics:
    """Metrics sink used when no exporter is configured."""

    def observe_nsb_submission(self, *, kind: str) -> None:
        return None

    def observe_claim(self, *, outcome: str) -> None:
        return None

    def observe_message(self, *, event: str) -> None:
        return None

    def observe_settlement(self, *, outcome: str) -> None:
        return None

    def observe_chain_block(self, *, chain: str) -> None:
        return None
