"""Deterministic ed25519 keys and canonical-payload signatures."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey

from .canonical import canonical_bytes


@dataclass(frozen=True)
class SigningKey:
    """A symbolic per-session key issued by the harness."""

    owner: str
    private: Ed25519PrivateKey

    @classmethod
    def derive(cls, owner: str, seed_material: str) -> "SigningKey":
        seed = hashlib.sha256(f"{seed_material}/{owner}".encode("utf-8")).digest()
        return cls(owner=owner, private=Ed25519PrivateKey.from_private_bytes(seed))

    @property
    def public(self) -> Ed25519PublicKey:
        return self.private.public_key()

    def public_hex(self) -> str:
        raw = self.public.public_bytes(
            encoding=serialization.Encoding.Raw, format=serialization.PublicFormat.Raw
        )
        return raw.hex()

    def sign_bytes(self, data: bytes) -> str:
        return self.private.sign(data).hex()

    def sign(self, payload: Any) -> str:
        return self.sign_bytes(canonical_bytes(payload))


def verify_bytes(public: Ed25519PublicKey, data: bytes, signature_hex: str) -> bool:
    """Return True only when the signature is cryptographically valid."""

    try:
        signature = bytes.fromhex(signature_hex)
    except ValueError:
        return False
    if len(signature) != 64:
        return False
    try:
        public.verify(signature, data)
    except InvalidSignature:
        return False
    return True


@dataclass
class KeyDirectory:
    """Public-key registry for parties, the ISC and NSB peers."""

    keys: dict[str, Ed25519PublicKey] = field(default_factory=dict)

    def register(self, key: SigningKey) -> None:
        self.keys[key.owner] = key.public

    def knows(self, owner: str) -> bool:
        return owner in self.keys

    def verify(self, owner: str, payload: Any, signature_hex: str) -> bool:
        public = self.keys.get(owner)
        if public is None:
            return False
        return verify_bytes(public, canonical_bytes(payload), signature_hex)
