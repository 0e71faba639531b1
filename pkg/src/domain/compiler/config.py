"""VES configuration consumed by the compiler and the session runtime."""
from __future__ import annotations

import logging
from decimal import Decimal
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.errors import ConfigError
from src.core.models import Party, Rate

LOGGER = logging.getLogger(__name__)


class VesConfig(BaseModel):
    """Relay accounts, deadline conversion and ISC settlement parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    relay_accounts: dict[str, str] = Field(default_factory=dict, description="chain id -> VES relay address")
    default_deadline_blocks: int = Field(30, ge=1, description="NSB blocks for `default` deadlines")
    blocks_per_minute: Rate = Field(Decimal(6), gt=0, description="NSB blocks produced per minute")
    reachable_chains: frozenset[str] = Field(default_factory=frozenset)
    isc_chain: str = Field("ChainN", description="chain hosting the insurance contract")
    isc_unit: str = Field("ncoin", description="native unit of the ISC chain")
    refund_accounts: dict[Party, str] = Field(default_factory=dict, description="reversion accounts on the ISC chain")
    fee_allowance: int = Field(0, ge=0, description="flat fee added to every wrapper's amt")
    rates: dict[str, Rate] = Field(default_factory=dict, description="unit -> ISC units per coin")
    account_owners: dict[str, Party] = Field(default_factory=dict, description="HSL account -> owning party")
    default_account_owner: Party = Party.CLIENT
    stake_cap: int = Field(20, ge=0, description="largest Tdg enumerated for staking")

    @field_validator("rates")
    @classmethod
    def _positive_rates(cls, value: dict[str, Decimal]) -> dict[str, Decimal]:
        for unit, rate in value.items():
            if rate <= 0:
                raise ValueError(f"rate for {unit} must be positive")
        return value

    @model_validator(mode="after")
    def _isc_chain_reachable(self) -> "VesConfig":
        if self.reachable_chains and self.isc_chain not in self.reachable_chains:
            raise ValueError(f"ISC chain {self.isc_chain} is not reachable")
        return self

    def owner_of(self, account: str) -> Party:
        return self.account_owners.get(account, self.default_account_owner)

    def rate_of(self, unit: str) -> Decimal | None:
        if unit == self.isc_unit:
            return self.rates.get(unit, Decimal(1))
        return self.rates.get(unit)


def parse_ves_config(data: Any) -> VesConfig:
    try:
        return VesConfig.model_validate(data or {})
    except ValidationError as exc:
        raise ConfigError(
            "E_CONFIG_INVALID",
            "invalid VES configuration",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


def load_ves_config(path: Path) -> VesConfig:
    """Load a VES configuration from YAML."""
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError("E_CONFIG_INVALID", f"config file {path} not found") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("E_CONFIG_INVALID", f"config file {path} is not valid YAML") from exc
    config = parse_ves_config(raw)
    LOGGER.debug("loaded VES config from %s", path)
    return config


__all__ = ["VesConfig", "load_ves_config", "parse_ves_config"]
