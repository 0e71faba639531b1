"""Length-prefixed little-endian binary form of proofs.

Membership proof layout::

    u32 len(key) | key | u32 len(value) | value | u64 index | u64 leaf_count
    u32 steps | steps x (u8 side | 32-byte sibling) | 32-byte root

Non-membership proof layout::

    u32 len(key) | key | u8 flags (bit0 left, bit1 right)
    [u32 len | membership] left? | [u32 len | membership] right? | 32-byte root
"""
from __future__ import annotations

from dataclasses import dataclass

from src.core.errors import MerkleError
from src.core.utils.canonical import DIGEST_SIZE

from .proofs import MembershipProof, NonMembershipProof, PathStep, Side


def _u32(value: int) -> bytes:
    return value.to_bytes(4, "little")


def _u64(value: int) -> bytes:
    return value.to_bytes(8, "little")


def encode_membership(proof: MembershipProof) -> bytes:
    parts = [
        _u32(len(proof.key)),
        proof.key,
        _u32(len(proof.value)),
        proof.value,
        _u64(proof.index),
        _u64(proof.leaf_count),
        _u32(len(proof.path)),
    ]
    for step in proof.path:
        parts.append(bytes([int(step.side)]))
        parts.append(step.sibling)
    parts.append(proof.root)
    return b"".join(parts)


def encode_non_membership(proof: NonMembershipProof) -> bytes:
    flags = (1 if proof.left is not None else 0) | (2 if proof.right is not None else 0)
    parts = [_u32(len(proof.key)), proof.key, bytes([flags])]
    for neighbour in (proof.left, proof.right):
        if neighbour is not None:
            encoded = encode_membership(neighbour)
            parts.append(_u32(len(encoded)))
            parts.append(encoded)
    parts.append(proof.root)
    return b"".join(parts)


def _malformed(reason: str) -> MerkleError:
    return MerkleError(code="E_MALFORMED_PROOF", message=reason)


@dataclass
class _Reader:
    data: bytes
    offset: int = 0

    def take(self, size: int) -> bytes:
        if size < 0 or self.offset + size > len(self.data):
            raise _malformed("truncated proof")
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "little")

    def u64(self) -> int:
        return int.from_bytes(self.take(8), "little")

    def finish(self) -> None:
        if self.offset != len(self.data):
            raise _malformed("trailing bytes after proof")


def _read_membership(reader: _Reader) -> MembershipProof:
    key = reader.take(reader.u32())
    value = reader.take(reader.u32())
    index = reader.u64()
    leaf_count = reader.u64()
    steps: list[PathStep] = []
    for _ in range(reader.u32()):
        side_byte = reader.take(1)[0]
        if side_byte not in (Side.LEFT, Side.RIGHT):
            raise _malformed("invalid side flag")
        steps.append(PathStep(sibling=reader.take(DIGEST_SIZE), side=Side(side_byte)))
    root = reader.take(DIGEST_SIZE)
    return MembershipProof(
        key=key, value=value, index=index, leaf_count=leaf_count, path=tuple(steps), root=root
    )


def decode_membership(data: bytes) -> MembershipProof:
    reader = _Reader(data)
    proof = _read_membership(reader)
    reader.finish()
    return proof


def decode_non_membership(data: bytes) -> NonMembershipProof:
    reader = _Reader(data)
    key = reader.take(reader.u32())
    flags = reader.take(1)[0]
    if flags > 3:
        raise _malformed("invalid neighbour flags")
    neighbours: list[MembershipProof | None] = []
    for bit in (1, 2):
        if flags & bit:
            inner = _Reader(reader.take(reader.u32()))
            neighbours.append(_read_membership(inner))
            inner.finish()
        else:
            neighbours.append(None)
    root = reader.take(DIGEST_SIZE)
    reader.finish()
    return NonMembershipProof(key=key, left=neighbours[0], right=neighbours[1], root=root)
