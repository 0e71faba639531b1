"""HSL frontend: parser, contract interfaces, unified types and semantic validation."""
from __future__ import annotations

from .ast import (
    AccountDef,
    CallArg,
    Coin,
    ContractDef,
    DeadlineAssignment,
    DeadlineSpec,
    EntityArg,
    HslProgram,
    Import,
    InvocationOp,
    Location,
    NumberArg,
    Operation,
    PaymentOp,
    StateVarArg,
    StringArg,
    TemporalConstraint,
)
from .diagnostics import Diagnostic, HslSemanticError, HslSyntaxError, HslTypeError
from .interfaces import (
    INTERFACE_SUFFIX,
    ContractInterface,
    Method,
    Param,
    StateVar,
    load_interfaces,
    parse_contract_interface,
)
from .parser import parse_hsl
from .types import candidate_types, is_ambiguous, map_type
from .validator import DEFAULT_DEADLINE, ResolvedArg, ValidatedProgram, validate

__all__ = [
    "AccountDef",
    "CallArg",
    "Coin",
    "ContractDef",
    "ContractInterface",
    "DEFAULT_DEADLINE",
    "DeadlineAssignment",
    "DeadlineSpec",
    "Diagnostic",
    "EntityArg",
    "HslProgram",
    "HslSemanticError",
    "HslSyntaxError",
    "HslTypeError",
    "INTERFACE_SUFFIX",
    "Import",
    "InvocationOp",
    "Location",
    "Method",
    "NumberArg",
    "Operation",
    "Param",
    "PaymentOp",
    "ResolvedArg",
    "StateVar",
    "StateVarArg",
    "StringArg",
    "TemporalConstraint",
    "ValidatedProgram",
    "candidate_types",
    "is_ambiguous",
    "load_interfaces",
    "map_type",
    "parse_contract_interface",
    "parse_hsl",
    "validate",
]
