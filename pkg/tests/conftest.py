"""Shared fixtures and stubs for the test-suite."""

from __future__ import annotations

import sys
from collections import defaultdict
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.domain.ports import ProtocolMetrics  # noqa: E402

FIXTURES = PROJECT_ROOT / "data" / "fixtures"


class StubMetrics(ProtocolMetrics):
    def __init__(self) -> None:
        self.nsb = defaultdict(int)
        self.claims = defaultdict(int)
        self.messages = defaultdict(int)
        self.settlements = defaultdict(int)
        self.chain_blocks = defaultdict(int)

    def observe_nsb_submission(self, *, kind: str) -> None:
        self.nsb[kind] += 1

    def observe_claim(self, *, outcome: str) -> None:
        self.claims[outcome] += 1

    def observe_message(self, *, event: str) -> None:
        self.messages[event] += 1

    def observe_settlement(self, *, outcome: str) -> None:
        self.settlements[outcome] += 1

    def observe_chain_block(self, *, chain: str) -> None:
        self.chain_blocks[chain] += 1


@pytest.fixture()
def stub_metrics() -> StubMetrics:
    return StubMetrics()


@pytest.fixture()
def fixtures_dir() -> Path:
    return FIXTURES
