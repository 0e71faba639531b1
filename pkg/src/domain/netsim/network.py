"""Deterministic discrete-event message bus."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Callable, Protocol

from src.core.errors import NetsimError
from src.core.utils import log_event, sha256, short_digest
from src.domain.ports import NullMetrics, ProtocolMetrics

from .adversary import AdversaryScript
from .clock import ScheduledEvent, SimClock

LOGGER = logging.getLogger(__name__)


class Message(Protocol):
    kind: str

    def encode(self) -> bytes: ...


Handler = Callable[[str, Message], None]


@dataclass(frozen=True)
class TraceRecord:
    time: int
    kind: str
    source: str
    target: str
    digest: str

    def line(self) -> str:
        return f"t={self.time} {self.kind} {self.source} {self.target} {self.digest}"


@dataclass(frozen=True)
class RunOutcome:
    steps: int
    capped: bool
    time: int


class Network:
    """Entities register a handler; ``send`` schedules deliveries as the script allows.

    Each directed link draws from its own RNG seeded by ``(seed, link)``, so interference on one
    link never shifts the randomness of another.
    """

    def __init__(
        self,
        script: AdversaryScript | None = None,
        *,
        seed: int = 0,
        metrics: ProtocolMetrics | None = None,
    ) -> None:
        self.script = script or AdversaryScript()
        self.seed = seed
        self.metrics = metrics or NullMetrics()
        self.clock = SimClock()
        self.trace: list[TraceRecord] = []
        self._handlers: dict[str, Handler] = {}
        self._rngs: dict[tuple[str, str], random.Random] = {}
        self._sent: dict[tuple[str, str], int] = {}

    @property
    def now(self) -> int:
        return self.clock.now

    def register(self, name: str, handler: Handler) -> None:
        if name in self._handlers:
            raise NetsimError("E_DUPLICATE_ENTITY", f"{name} is already registered")
        self._handlers[name] = handler

    def check_links(self) -> None:
        """Every link rule endpoint is a registered entity or the ``*`` wildcard."""
        for rule in self.script.links:
            stray = sorted({rule.source, rule.target} - {"*", *self._handlers})
            if stray:
                raise NetsimError(
                    "E_UNKNOWN_ENTITY", f"link rule {rule.source} -> {rule.target} names unregistered {stray}"
                )

    def _rng(self, link: tuple[str, str]) -> random.Random:
        if link not in self._rngs:
            self._rngs[link] = random.Random(f"{self.seed}/{link[0]}->{link[1]}")
        return self._rngs[link]

    def send(self, source: str, target: str, payload: Message) -> bool:
        """Queue ``payload``; returns False when the script drops it."""
        if target not in self._handlers:
            raise NetsimError("E_UNKNOWN_ENTITY", f"{source} sent {payload.kind} to unregistered {target}")
        link = (source, target)
        index = self._sent.get(link, 0)
        self._sent[link] = index + 1
        digest = short_digest(payload.encode())
        self._record("send", source, target, digest)
        rule = self.script.rule_for(source, target)
        delay = 1
        if rule is not None:
            rng = self._rng(link)
            roll = rng.random()
            extra = rng.randint(0, rule.jitter) if rule.jitter else 0
            if index in rule.drop_indices or roll < rule.drop_probability:
                self._record("drop", source, target, digest)
                return False
            delay = rule.delay + extra
        handler = self._handlers[target]

        def deliver() -> None:
            self._record("deliver", source, target, digest)
            handler(source, payload)

        self.clock.schedule(self.now + delay, f"{payload.kind}:{source}->{target}", deliver)
        return True

    def schedule(self, delay: int, name: str, callback: Callable[[], None]) -> ScheduledEvent:
        if delay < 0:
            raise NetsimError("E_NEGATIVE_DELAY", f"timer {name} scheduled {delay} ticks in the past")
        return self.clock.schedule(self.now + delay, name, callback)

    def step(self) -> ScheduledEvent | None:
        event = self.clock.pop()
        if event is not None:
            event.action()
        return event

    def run_until_quiescent(self, max_steps: int) -> RunOutcome:
        return self.run_until(lambda: False, max_steps)

    def run_until(self, done: Callable[[], bool], max_steps: int) -> RunOutcome:
        """Step until ``done()``, the queue drains, or ``max_steps`` is hit (reported, not raised)."""
        self.check_links()
        steps = 0
        while not done():
            if steps >= max_steps:
                log_event(LOGGER, "netsim_capped", level=logging.WARNING, steps=steps, time=self.now)
                return RunOutcome(steps, True, self.now)
            if self.step() is None:
                break
            steps += 1
        return RunOutcome(steps, False, self.now)

    def _record(self, kind: str, source: str, target: str, digest: str) -> None:
        self.trace.append(TraceRecord(self.now, kind, source, target, digest))
        self.metrics.observe_message(event=kind)

    def trace_lines(self) -> list[str]:
        return [record.line() for record in self.trace]

    def trace_digest(self) -> str:
        return sha256("\n".join(self.trace_lines()).encode("utf-8")).hex()


__all__ = ["Handler", "Message", "Network", "RunOutcome", "TraceRecord"]
