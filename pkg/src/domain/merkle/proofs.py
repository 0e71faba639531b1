"""Membership and non-membership proofs."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from src.core.errors import MerkleError
from src.core.utils.canonical import DIGEST_SIZE

from .tree import EMPTY_ROOT, MerkleTree, SortedMerkleTree, leaf_hash, node_hash, seal_root


class Side(IntEnum):
    """Which side the sibling sits on."""

    LEFT = 0
    RIGHT = 1


@dataclass(frozen=True)
class PathStep:
    sibling: bytes
    side: Side


@dataclass(frozen=True)
class MembershipProof:
    key: bytes
    value: bytes
    index: int
    leaf_count: int
    path: tuple[PathStep, ...]
    root: bytes


@dataclass(frozen=True)
class NonMembershipProof:
    """Neighbours bracketing ``key``; ``None`` stands for a boundary sentinel."""

    key: bytes
    left: MembershipProof | None
    right: MembershipProof | None
    root: bytes


def expected_sides(index: int, leaf_count: int) -> list[Side]:
    """Sibling sides a proof for ``index`` must carry in a tree of ``leaf_count`` leaves."""

    sides: list[Side] = []
    position, width = index, leaf_count
    while width > 1:
        if not (position == width - 1 and width % 2 == 1):
            sides.append(Side.LEFT if position % 2 else Side.RIGHT)
        position //= 2
        width = (width + 1) // 2
    return sides


def prove_membership(tree: MerkleTree, key: bytes) -> MembershipProof:
    position = tree.position(key)
    index = position
    path: list[PathStep] = []
    for level in tree.levels[:-1]:
        width = len(level)
        if position == width - 1 and width % 2 == 1:
            pass  # promoted
        elif position % 2 == 0:
            path.append(PathStep(level[position + 1], Side.RIGHT))
        else:
            path.append(PathStep(level[position - 1], Side.LEFT))
        position //= 2
    leaf_key, value = tree.leaves[index]
    return MembershipProof(
        key=leaf_key, value=value, index=index, leaf_count=len(tree), path=tuple(path), root=tree.root
    )


def fold(proof: MembershipProof) -> bytes | None:
    """Recompute the sealed root a proof commits to, or ``None`` if malformed."""

    if proof.leaf_count < 1 or not 0 <= proof.index < proof.leaf_count:
        return None
    sides = expected_sides(proof.index, proof.leaf_count)
    if len(sides) != len(proof.path):
        return None
    accumulator = leaf_hash(proof.key, proof.value)
    for expected, step in zip(sides, proof.path):
        if step.side is not expected or len(step.sibling) != DIGEST_SIZE:
            return None
        if step.side is Side.LEFT:
            accumulator = node_hash(step.sibling, accumulator)
        else:
            accumulator = node_hash(accumulator, step.sibling)
    return seal_root(accumulator, proof.leaf_count)


def verify_membership(root: bytes, proof: MembershipProof) -> bool:
    if proof.root != root:
        return False
    return fold(proof) == root


def prove_non_membership(tree: MerkleTree, key: bytes) -> NonMembershipProof:
    if not isinstance(tree, SortedMerkleTree):
        raise MerkleError(code="E_NOT_SORTED", message="non-membership needs a sorted tree")
    if key in tree:
        raise MerkleError(
            code="E_KEY_PRESENT",
            message="key is present; non-membership cannot be proven",
            details={"key": key.hex()},
        )
    gap = tree.gap(key)
    keys = tree.keys()
    left = prove_membership(tree, keys[gap - 1]) if gap > 0 else None
    right = prove_membership(tree, keys[gap]) if gap < len(keys) else None
    return NonMembershipProof(key=key, left=left, right=right, root=tree.root)


def verify_non_membership(root: bytes, proof: NonMembershipProof) -> bool:
    if proof.root != root:
        return False
    left, right = proof.left, proof.right
    if left is None and right is None:
        return root == EMPTY_ROOT
    for neighbour in (left, right):
        if neighbour is not None and not verify_membership(root, neighbour):
            return False
    if left is not None and not left.key < proof.key:
        return False
    if right is not None and not proof.key < right.key:
        return False
    if left is not None and right is not None:
        return left.leaf_count == right.leaf_count and right.index == left.index + 1
    if left is None:
        assert right is not None
        return right.index == 0
    return left.index == left.leaf_count - 1
