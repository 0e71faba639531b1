"""Canonical byte encodings used for digests, signatures, and files."""
from __future__ import annotations

import hashlib
import json
from decimal import Decimal
from typing import Any

from pydantic import BaseModel

DIGEST_SIZE = 32


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", by_alias=True)
    if isinstance(value, Decimal):
        return format(value.normalize(), "f")
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def canonical_json(value: Any) -> str:
    """Compact JSON with sorted keys; the signature preimage format."""

    return json.dumps(_plain(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(value: Any) -> bytes:
    return canonical_json(value).encode("utf-8")


def pretty_json(value: Any) -> str:
    """Sorted, indented JSON with a trailing newline, for files on disk."""

    return json.dumps(_plain(value), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest_of(value: Any) -> bytes:
    return sha256(canonical_bytes(value))


def hex_digest(value: Any) -> str:
    return digest_of(value).hex()


def short_digest(data: bytes) -> str:
    """Sixteen hex chars, used in trace lines."""

    return hashlib.sha256(data).hexdigest()[:16]
