"""Logical clock and event queue."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable


@dataclass(order=True)
class ScheduledEvent:
    time: int
    seq: int
    label: str = field(compare=False)
    action: Callable[[], None] = field(compare=False, repr=False)


class SimClock:
    """Events run in (time, insertion) order; time never goes backwards."""

    def __init__(self) -> None:
        self.now = 0
        self._queue: list[ScheduledEvent] = []
        self._counter = 0

    def schedule(self, at: int, label: str, action: Callable[[], None]) -> ScheduledEvent:
        event = ScheduledEvent(max(at, self.now), self._counter, label, action)
        self._counter += 1
        heapq.heappush(self._queue, event)
        return event

    def pop(self) -> ScheduledEvent | None:
        if not self._queue:
            return None
        event = heapq.heappop(self._queue)
        self.now = event.time
        return event

    def peek_time(self) -> int | None:
        return self._queue[0].time if self._queue else None

    @property
    def pending(self) -> int:
        return len(self._queue)


__all__ = ["ScheduledEvent", "SimClock"]
