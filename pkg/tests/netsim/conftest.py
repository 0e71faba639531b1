from __future__ import annotations

from dataclasses import dataclass, field

import pytest

from src.core.utils import canonical_bytes
from src.domain.netsim import AdversaryScript, LinkRule, Message, Network


@dataclass(frozen=True)
class Ping:
    body: str
    kind: str = "ping"

    def encode(self) -> bytes:
        return canonical_bytes({"kind": self.kind, "body": self.body})


@dataclass
class Inbox:
    received: list[tuple[int, str, str]] = field(default_factory=list)


def wire(network: Network, *names: str) -> dict[str, Inbox]:
    """Register a recording handler for each name."""
    inboxes: dict[str, Inbox] = {}
    for name in names:
        inbox = Inbox()

        def handle(source: str, payload: Message, inbox: Inbox = inbox) -> None:
            assert isinstance(payload, Ping)
            inbox.received.append((network.now, source, payload.body))

        network.register(name, handle)
        inboxes[name] = inbox
    return inboxes


def lossy(seed: int) -> Network:
    script = AdversaryScript(
        links=(LinkRule(source="ves", target="client", drop_probability=0.4, delay=1, jitter=3),)
    )
    return Network(script, seed=seed)


@pytest.fixture()
def network() -> Network:
    return Network()
