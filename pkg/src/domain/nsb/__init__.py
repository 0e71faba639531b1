"""Network Status Blockchain."""
from __future__ import annotations

from .blocks import NsbBlock, StatusClaim, Submission, SubmissionKind
from .config import NsbConfig, QuorumConfig
from .ledger import Nsb
from .peers import NsbPeer, count_valid, finalized_as_claimed, peer_id

__all__ = [
    "Nsb",
    "NsbBlock",
    "NsbConfig",
    "NsbPeer",
    "QuorumConfig",
    "StatusClaim",
    "Submission",
    "SubmissionKind",
    "count_valid",
    "finalized_as_claimed",
    "peer_id",
]
