"""Simulated programmable blockchains."""
from __future__ import annotations

from .genesis import AccountGenesis, ChainGenesis, ContractGenesis, GenesisFile, load_genesis, parse_genesis
from .handlers import HANDLERS, CallContext, ContractHandler, HandlerError, register_handler
from .ledger import (
    Chain,
    ChainBlock,
    ChainProof,
    Receipt,
    TxStatus,
    balance_key,
    tx_leaf_value,
    var_key,
)
from .transaction import ContractCall, OnChainTransaction

__all__ = [
    "AccountGenesis",
    "CallContext",
    "Chain",
    "ChainBlock",
    "ChainGenesis",
    "ChainProof",
    "ContractCall",
    "ContractGenesis",
    "ContractHandler",
    "GenesisFile",
    "HANDLERS",
    "HandlerError",
    "OnChainTransaction",
    "Receipt",
    "TxStatus",
    "balance_key",
    "load_genesis",
    "parse_genesis",
    "register_handler",
    "tx_leaf_value",
    "var_key",
]
