"""HSL-to-Tdg compiler and stake computation."""
from __future__ import annotations

from .config import VesConfig, load_ves_config, parse_ves_config
from .lowering import compile_program, deadline_to_blocks
from .staking import DEFAULT_CAP, committable_subsets, stake_requirement, stake_requirements, subset_balance
from .tdg import (
    AccountRef,
    ArgRef,
    InvocationPayload,
    Payload,
    PaymentPayload,
    SessionParams,
    StateProofSlot,
    Tdg,
    TransactionWrapper,
    WrapperMeta,
)

__all__ = [
    "AccountRef",
    "ArgRef",
    "DEFAULT_CAP",
    "InvocationPayload",
    "Payload",
    "PaymentPayload",
    "SessionParams",
    "StateProofSlot",
    "Tdg",
    "TransactionWrapper",
    "VesConfig",
    "WrapperMeta",
    "committable_subsets",
    "compile_program",
    "deadline_to_blocks",
    "load_ves_config",
    "parse_ves_config",
    "stake_requirement",
    "stake_requirements",
    "subset_balance",
]
