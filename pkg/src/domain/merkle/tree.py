"""Binary hash trees over key/value leaves.

Construction:

* entry digest ``E = H(u32le(len k) || k || v)``
* leaf hash ``H(0x00 || E)``, interior hash ``H(0x01 || left || right)``
* an odd node at the end of a level is promoted unchanged
* the published root seals the leaf count: ``H(0x02 || u64le(n) || top)``
* the empty tree has the all-zero sentinel root
"""
from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from src.core.errors import MerkleError
from src.core.utils.canonical import DIGEST_SIZE, sha256

LOGGER = logging.getLogger(__name__)

EMPTY_ROOT = bytes(DIGEST_SIZE)
LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"
ROOT_PREFIX = b"\x02"

Leaf = tuple[bytes, bytes]


def entry_digest(key: bytes, value: bytes) -> bytes:
    return sha256(len(key).to_bytes(4, "little") + key + value)


def leaf_hash(key: bytes, value: bytes) -> bytes:
    return sha256(LEAF_PREFIX + entry_digest(key, value))


def node_hash(left: bytes, right: bytes) -> bytes:
    return sha256(NODE_PREFIX + left + right)


def seal_root(top: bytes, leaf_count: int) -> bytes:
    return sha256(ROOT_PREFIX + leaf_count.to_bytes(8, "little") + top)


def _next_level(level: Sequence[bytes]) -> tuple[bytes, ...]:
    paired = [node_hash(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
    if len(level) % 2 == 1:
        paired.append(level[-1])
    return tuple(paired)


@dataclass(frozen=True)
class MerkleTree:
    """Immutable tree; ``levels[0]`` holds the leaf hashes."""

    leaves: tuple[Leaf, ...]
    root: bytes
    levels: tuple[tuple[bytes, ...], ...] = field(repr=False)
    _positions: dict[bytes, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.leaves)

    def __contains__(self, key: object) -> bool:
        return key in self._positions

    def keys(self) -> list[bytes]:
        return [key for key, _ in self.leaves]

    def get(self, key: bytes) -> bytes | None:
        position = self._positions.get(key)
        return None if position is None else self.leaves[position][1]

    def position(self, key: bytes) -> int:
        try:
            return self._positions[key]
        except KeyError as exc:
            raise MerkleError(
                code="E_ABSENT_KEY",
                message="key is not present in the tree",
                details={"key": key.hex()},
            ) from exc


@dataclass(frozen=True)
class SortedMerkleTree(MerkleTree):
    """Tree whose leaves are strictly increasing by key."""

    def gap(self, key: bytes) -> int:
        """Index of the first leaf whose key is greater than ``key``."""

        return bisect.bisect_right(self.keys(), key)


def build(leaves: Iterable[Leaf], *, sorted: bool = False) -> MerkleTree:
    """Build a tree; with ``sorted`` the leaves are reordered by key."""

    items = [(bytes(key), bytes(value)) for key, value in leaves]
    positions: dict[bytes, int] = {}
    for index, (key, _) in enumerate(items):
        if key in positions:
            raise MerkleError(
                code="E_DUPLICATE_KEY",
                message="tree keys must be unique",
                details={"key": key.hex()},
            )
        positions[key] = index
    if sorted:
        items.sort(key=lambda leaf: leaf[0])
        positions = {key: index for index, (key, _) in enumerate(items)}

    levels: list[tuple[bytes, ...]] = [tuple(leaf_hash(key, value) for key, value in items)]
    while len(levels[-1]) > 1:
        levels.append(_next_level(levels[-1]))
    root = seal_root(levels[-1][0], len(items)) if items else EMPTY_ROOT

    tree_type = SortedMerkleTree if sorted else MerkleTree
    tree = tree_type(leaves=tuple(items), root=root, levels=tuple(levels), _positions=positions)
    LOGGER.debug("merkle tree built: %d leaves, sorted=%s", len(items), sorted)
    return tree
