"""Genesis fixtures: accounts, balances and contract handler registrations."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.errors import ConfigError

from .handlers import HANDLERS

LOGGER = logging.getLogger(__name__)


class AccountGenesis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    address: str
    owner: str = Field(..., description="key owner allowed to sign for this address")
    balances: dict[str, int] = Field(default_factory=dict)

    @field_validator("balances")
    @classmethod
    def _non_negative(cls, value: dict[str, int]) -> dict[str, int]:
        for unit, amount in value.items():
            if amount < 0:
                raise ValueError(f"negative genesis balance for {unit}")
        return value


class ContractGenesis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    address: str
    handler: str
    storage: dict[str, str] = Field(default_factory=dict)
    owner: str | None = Field(None, description="set for contracts that can also sign, such as the ISC escrow")

    @field_validator("handler")
    @classmethod
    def _known_handler(cls, value: str) -> str:
        if value not in HANDLERS:
            raise ValueError(f"unknown contract handler {value!r}")
        return value


class ChainGenesis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    chain_id: str
    confirm_depth: int = Field(1, ge=0)
    accounts: tuple[AccountGenesis, ...] = ()
    contracts: tuple[ContractGenesis, ...] = ()

    @model_validator(mode="after")
    def _unique_addresses(self) -> "ChainGenesis":
        addresses = [item.address for item in (*self.accounts, *self.contracts)]
        duplicates = sorted({address for address in addresses if addresses.count(address) > 1})
        if duplicates:
            raise ValueError(f"duplicate genesis addresses on {self.chain_id}: {duplicates}")
        return self


class GenesisFile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    chains: tuple[ChainGenesis, ...]

    @model_validator(mode="after")
    def _unique_chains(self) -> "GenesisFile":
        ids = [chain.chain_id for chain in self.chains]
        if len(ids) != len(set(ids)):
            raise ValueError("chain ids must be unique")
        return self

    def by_id(self) -> dict[str, ChainGenesis]:
        return {chain.chain_id: chain for chain in self.chains}


def parse_genesis(data: Any) -> GenesisFile:
    try:
        return GenesisFile.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(
            "E_CONFIG_INVALID",
            "invalid genesis fixture",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


def load_genesis(path: Path) -> GenesisFile:
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError("E_CONFIG_INVALID", f"genesis file {path} not found") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("E_CONFIG_INVALID", f"genesis file {path} is not valid YAML") from exc
    genesis = parse_genesis(raw)
    LOGGER.debug("loaded genesis for %s", [chain.chain_id for chain in genesis.chains])
    return genesis


__all__ = ["AccountGenesis", "ChainGenesis", "ContractGenesis", "GenesisFile", "load_genesis", "parse_genesis"]
