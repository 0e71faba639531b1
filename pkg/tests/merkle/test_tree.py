from __future__ import annotations

import hashlib
import random

import pytest

from src.core.errors import MerkleError
from src.domain.merkle import EMPTY_ROOT, SortedMerkleTree, build


def _h(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def _oracle_root(pairs: list[tuple[bytes, bytes]]) -> bytes:
    level = [_h(b"\x00" + _h(len(k).to_bytes(4, "little") + k + v)) for k, v in pairs]
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level), 2):
            if i + 1 < len(level):
                nxt.append(_h(b"\x01" + level[i] + level[i + 1]))
            else:
                nxt.append(level[i])
        level = nxt
    return _h(b"\x02" + len(pairs).to_bytes(8, "little") + level[0])


def test_empty_tree_has_sentinel_root() -> None:
    tree = build([])
    assert tree.root == EMPTY_ROOT == bytes(32)
    assert len(tree) == 0


def test_single_leaf_root() -> None:
    tree = build([(b"k", b"v")])
    expected = _h(b"\x02" + (1).to_bytes(8, "little") + _h(b"\x00" + _h(b"\x01\x00\x00\x00kv")))
    assert tree.root == expected


def test_random_root_matches_straight_line_oracle() -> None:
    rng = random.Random(7)
    pairs = [(rng.randbytes(8) + bytes([i]), rng.randbytes(rng.randint(0, 20))) for i in range(100)]
    assert build(pairs).root == _oracle_root(pairs)


def test_sorted_flag_reorders_leaves() -> None:
    tree = build([(b"c", b"3"), (b"a", b"1"), (b"b", b"2")], sorted=True)
    assert isinstance(tree, SortedMerkleTree)
    assert tree.keys() == [b"a", b"b", b"c"]
    assert tree.root == build([(b"a", b"1"), (b"b", b"2"), (b"c", b"3")]).root


def test_duplicate_key_rejected() -> None:
    with pytest.raises(MerkleError) as excinfo:
        build([(b"a", b"1"), (b"a", b"2")])
    assert excinfo.value.code == "E_DUPLICATE_KEY"


def test_key_value_boundary_is_unambiguous() -> None:
    assert build([(b"ab", b"c")]).root != build([(b"a", b"bc")]).root


def test_lookup_helpers() -> None:
    tree = build([(b"a", b"1"), (b"b", b"2")])
    assert tree.get(b"b") == b"2"
    assert tree.get(b"z") is None
    assert b"a" in tree
    with pytest.raises(MerkleError):
        tree.position(b"z")
