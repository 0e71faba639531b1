"""Simulated NSB consensus peers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from src.core.errors import ChainError
from src.core.utils import KeyDirectory, SigningKey
from src.domain.attestation import Signature
from src.domain.chain import Chain

from .blocks import StatusClaim


def peer_id(index: int) -> str:
    return f"nsb-peer-{index}"


@dataclass(frozen=True)
class NsbPeer:
    index: int
    key: SigningKey
    honest: bool = True

    def review(self, claim: StatusClaim, chains: Mapping[str, Chain]) -> Signature | None:
        """Co-sign ``claim``; an honest peer aborts unless T~ is finalized in the claimed block."""
        if self.honest and not finalized_as_claimed(claim, chains):
            return None
        return Signature(signer=self.key.owner, value=self.key.sign(claim.body()))


def finalized_as_claimed(claim: StatusClaim, chains: Mapping[str, Chain]) -> bool:
    chain = chains.get(claim.chain)
    if chain is None:
        return False
    status = chain.query_status(claim.tx_id)
    if not status.finalized or status.height != claim.height:
        return False
    try:
        block = chain.block(claim.height)
    except ChainError:
        return False
    return block.tx_root.hex() == claim.tx_root and block.state_root.hex() == claim.state_root


def count_valid(claim: StatusClaim, keys: KeyDirectory) -> int:
    """Distinct peers with a valid signature over the claim body."""
    valid = {
        signature.signer
        for signature in claim.signatures
        if signature.signer.startswith("nsb-peer-") and keys.verify(signature.signer, claim.body(), signature.value)
    }
    return len(valid)


__all__ = ["NsbPeer", "count_valid", "finalized_as_claimed", "peer_id"]
