"""Protocol timers, all measured in NSB blocks."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class TimerConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    delta: int = Field(5, ge=0, description="freshness bound for ts_open and ts_closed")
    settle_after_blocks: int = Field(140, ge=1, description="ISC timer, counted from session activation")
    setup_timeout_blocks: int = Field(20, ge=1, description="contracts not activated by then are refunded and erased")
    claim_lead_blocks: int = Field(2, ge=1, description="parties claim this many blocks before the timer")
    close_patience_blocks: int = Field(2, ge=0, description="wait for a co-signed close before falling back to Merk^c")


__all__ = ["TimerConfig"]
