"""Encoding, signing and event helpers."""

from .canonical import canonical_bytes, canonical_json, digest_of, hex_digest, pretty_json, sha256, short_digest
from .events import log_event
from .signing import KeyDirectory, SigningKey

__all__ = [
    "KeyDirectory",
    "SigningKey",
    "canonical_bytes",
    "canonical_json",
    "digest_of",
    "hex_digest",
    "log_event",
    "pretty_json",
    "sha256",
    "short_digest",
]
