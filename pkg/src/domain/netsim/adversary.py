"""Adversary scripts: link interference, party corruption and NSB peer dishonesty."""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.models import CertKind, Party

MisbehaviourKind = Literal[
    "withhold",
    "delay",
    "equivocate",
    "forge",
    "stale_ts",
    "future_ts",
    "tamper_state",
    "understake",
    "reject_contract",
]

Hook = Literal["drive", "init", "inited", "open", "post", "close", "claim"]


class LinkRule(BaseModel):
    """Interference on the directed link ``source -> target``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    source: str
    target: str
    drop_probability: float = Field(0.0, ge=0.0, le=1.0)
    drop_indices: frozenset[int] = Field(default_factory=frozenset, description="0-based message indices to drop")
    delay: int = Field(1, ge=1, description="base delivery delay in ticks")
    jitter: int = Field(0, ge=0, description="extra uniform delay in [0, jitter]; reorders messages")

    def matches(self, source: str, target: str) -> bool:
        return self.source in ("*", source) and self.target in ("*", target)


class Misbehaviour(BaseModel):
    """One substituted handler behaviour of a corrupted party."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: MisbehaviourKind
    hook: Hook | None = Field(None, description="required for withhold")
    seqs: frozenset[int] = Field(default_factory=frozenset, description="wrappers affected; empty means all")
    blocks: int = Field(0, ge=0, description="NSB blocks for delay")

    @model_validator(mode="after")
    def _shape(self) -> "Misbehaviour":
        if self.kind == "withhold" and self.hook is None:
            raise ValueError("withhold needs a hook")
        if self.kind == "delay" and self.blocks < 1:
            raise ValueError("delay needs blocks >= 1")
        return self

    def applies(self, seq: int | None) -> bool:
        return not self.seqs or seq in self.seqs


class CrashRule(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    at_tick: int | None = Field(None, ge=0)
    on_receive: CertKind | None = None
    seq: int | None = Field(None, ge=1)

    @model_validator(mode="after")
    def _one_trigger(self) -> "CrashRule":
        if (self.at_tick is None) == (self.on_receive is None):
            raise ValueError("a crash needs exactly one of at_tick or on_receive")
        return self


class Corruption(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    party: Party
    crash: CrashRule | None = None
    behaviours: tuple[Misbehaviour, ...] = ()

    def find(self, kind: MisbehaviourKind, seq: int | None = None, hook: Hook | None = None) -> Misbehaviour | None:
        for item in self.behaviours:
            if item.kind == kind and item.applies(seq) and (hook is None or item.hook == hook):
                return item
        return None


class AdversaryScript(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    links: tuple[LinkRule, ...] = ()
    corruptions: tuple[Corruption, ...] = ()
    nsb_dishonest: frozenset[int] = Field(default_factory=frozenset)

    @model_validator(mode="after")
    def _one_honest_party(self) -> "AdversaryScript":
        parties = [item.party for item in self.corruptions]
        if len(parties) != len(set(parties)):
            raise ValueError("at most one corruption entry per party")
        if set(parties) == set(Party):
            raise ValueError("at least one party must stay honest")
        return self

    def rule_for(self, source: str, target: str) -> LinkRule | None:
        """The first matching rule wins."""
        return next((rule for rule in self.links if rule.matches(source, target)), None)

    def corruption(self, party: Party) -> Corruption | None:
        return next((item for item in self.corruptions if item.party is party), None)

    def honest(self, party: Party) -> bool:
        return self.corruption(party) is None


__all__ = [
    "AdversaryScript",
    "Corruption",
    "CrashRule",
    "Hook",
    "LinkRule",
    "Misbehaviour",
    "MisbehaviourKind",
]
