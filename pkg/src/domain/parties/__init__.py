"""Prot_VES and Prot_CLI: session actors, certificate handlers and watching services."""
from __future__ import annotations

from .messages import (
    CertMessage,
    Claim,
    ContractAck,
    ContractCreated,
    ContractRequest,
    IscMessage,
    PartyMessage,
    SessionActivated,
)
from .party import ISC_ENDPOINT, PartyContext, ProtocolParty
from .roles import ClientParty, VesParty
from .session import Rejection, Session, TidView
from .watchers import WatchingParty

__all__ = [
    "CertMessage",
    "Claim",
    "ClientParty",
    "ContractAck",
    "ContractCreated",
    "ContractRequest",
    "ISC_ENDPOINT",
    "IscMessage",
    "PartyContext",
    "PartyMessage",
    "ProtocolParty",
    "Rejection",
    "Session",
    "SessionActivated",
    "TidView",
    "VesParty",
    "WatchingParty",
]
