"""Hash-tree primitives and proofs."""
from __future__ import annotations

from .codec import decode_membership, decode_non_membership, encode_membership, encode_non_membership
from .proofs import (
    MembershipProof,
    NonMembershipProof,
    PathStep,
    Side,
    fold,
    prove_membership,
    prove_non_membership,
    verify_membership,
    verify_non_membership,
)
from .tree import EMPTY_ROOT, MerkleTree, SortedMerkleTree, build, leaf_hash, node_hash, seal_root

__all__ = [
    "EMPTY_ROOT",
    "MembershipProof",
    "MerkleTree",
    "NonMembershipProof",
    "PathStep",
    "Side",
    "SortedMerkleTree",
    "build",
    "decode_membership",
    "decode_non_membership",
    "encode_membership",
    "encode_non_membership",
    "fold",
    "leaf_hash",
    "node_hash",
    "prove_membership",
    "prove_non_membership",
    "seal_root",
    "verify_membership",
    "verify_non_membership",
]
