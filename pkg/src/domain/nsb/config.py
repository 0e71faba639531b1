"""NSB quorum and block production settings."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator


class QuorumConfig(BaseModel):
    """``peers`` simulated consensus nodes; a status claim needs ``threshold`` signatures."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    peers: int = Field(4, ge=1, description="N")
    threshold: int = Field(3, ge=1, description="K")
    dishonest: frozenset[int] = Field(default_factory=frozenset, description="indices of peers that sign anything")

    @model_validator(mode="after")
    def _bounds(self) -> "QuorumConfig":
        if self.threshold > self.peers:
            raise ValueError(f"threshold {self.threshold} exceeds peer count {self.peers}")
        stray = sorted(index for index in self.dishonest if not 0 <= index < self.peers)
        if stray:
            raise ValueError(f"dishonest peer indices out of range: {stray}")
        return self

    def honest(self, index: int) -> bool:
        return index not in self.dishonest

    @property
    def safe(self) -> bool:
        """At most N-K peers are dishonest."""
        return len(self.dishonest) <= self.peers - self.threshold


class NsbConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    quorum: QuorumConfig = Field(default_factory=QuorumConfig)
    capacity: int = Field(64, ge=1, description="items taken from each pool per block")
    watching: bool = Field(False, description="stream finalized chain roots instead of waiting for claims")


__all__ = ["NsbConfig", "QuorumConfig"]
