"""Discrete-event bus with scripted adversarial interference."""
from __future__ import annotations

from .adversary import AdversaryScript, Corruption, CrashRule, Hook, LinkRule, Misbehaviour, MisbehaviourKind
from .clock import ScheduledEvent, SimClock
from .network import Handler, Message, Network, RunOutcome, TraceRecord

__all__ = [
    "AdversaryScript",
    "Corruption",
    "CrashRule",
    "Handler",
    "Hook",
    "LinkRule",
    "Message",
    "Misbehaviour",
    "MisbehaviourKind",
    "Network",
    "RunOutcome",
    "ScheduledEvent",
    "SimClock",
    "TraceRecord",
]
