"""The Network Status Blockchain: action staking, status claims and epoch blocks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from src.core.errors import MerkleError, NsbError
from src.core.utils import KeyDirectory, SigningKey, log_event
from src.domain.attestation import ActionProof, Certificate, StatusProof, memo_session, status_key, status_value
from src.domain.chain import Chain
from src.domain.merkle import (
    EMPTY_ROOT,
    MerkleTree,
    NonMembershipProof,
    build,
    prove_membership,
    prove_non_membership,
)
from src.domain.ports import NullMetrics, ProtocolMetrics

from .blocks import NsbBlock, StatusClaim, Submission
from .config import NsbConfig
from .peers import NsbPeer, count_valid, peer_id

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class _StatusSnapshot:
    top: MerkleTree
    subtrees: dict[str, MerkleTree]


@dataclass
class _Pools:
    actions: list[tuple[Certificate, Submission]] = field(default_factory=list)
    claims: list[tuple[StatusClaim, Submission]] = field(default_factory=list)


class Nsb:
    """Single-owner NSB state stepped by the scheduler.

    ActionMT holds the certificates committed in one block. StatusMT is cumulative:
    one subtree per chain keyed by chain height, indexed by a top tree keyed by chain id.
    """

    def __init__(
        self,
        config: NsbConfig,
        *,
        chains: Mapping[str, Chain],
        keys: KeyDirectory,
        peer_keys: Sequence[SigningKey],
        metrics: ProtocolMetrics | None = None,
    ) -> None:
        quorum = config.quorum
        if len(peer_keys) != quorum.peers:
            raise NsbError("E_PEER_KEYS", f"{len(peer_keys)} peer keys for {quorum.peers} peers")
        self.config = config
        self.chains = chains
        self.keys = keys
        self.metrics = metrics or NullMetrics()
        self.peers = tuple(
            NsbPeer(index=index, key=key, honest=quorum.honest(index)) for index, key in enumerate(peer_keys)
        )
        for peer in self.peers:
            if peer.key.owner != peer_id(peer.index):
                raise NsbError("E_PEER_KEYS", f"peer {peer.index} holds a key for {peer.key.owner}")
        self._pools = _Pools()
        self._pooled: set[bytes] = set()
        self._committed: dict[bytes, int] = {}
        self._status: dict[str, dict[int, bytes]] = {}
        self._status_height: dict[tuple[str, int], int] = {}
        self._sessions: set[str] = set()
        self._watched: dict[str, int] = {chain_id: chain.height for chain_id, chain in chains.items()}
        self._blocks: list[NsbBlock] = []
        self._action_trees: list[MerkleTree] = []
        self._actions: list[tuple[Certificate, ...]] = []
        self._snapshots: list[_StatusSnapshot] = []
        self.submissions: list[Submission] = []
        self._seal(actions=(), claims=(), included=())

    # queries -----------------------------------------------------------------

    @property
    def height(self) -> int:
        return self._blocks[-1].height

    def block_height(self) -> int:
        return self.height

    def block(self, height: int) -> NsbBlock:
        if not 0 <= height <= self.height:
            raise NsbError("E_NOT_FOUND", f"NSB has no block {height}")
        return self._blocks[height]

    def actions(self, height: int) -> tuple[Certificate, ...]:
        """Certificates committed in block ``height``, in ActionMT key order."""
        self.block(height)
        return self._actions[height]

    def committed_height(self, key: bytes) -> int | None:
        return self._committed.get(key)

    def merkle_proof(self, key: bytes) -> ActionProof:
        """Link a staked certificate back to the ActionRoot of its committing block."""
        height = self._committed.get(key)
        if height is None:
            raise NsbError("E_NOT_FOUND", f"action {key.hex()[:16]} is not committed", details={"key": key.hex()})
        return ActionProof(height=height, proof=prove_membership(self._action_trees[height], key))

    def non_membership(self, key: bytes, height: int) -> NonMembershipProof:
        self.block(height)
        try:
            return prove_non_membership(self._action_trees[height], key)
        except MerkleError as exc:
            raise NsbError(
                "E_KEY_PRESENT", f"action {key.hex()[:16]} is committed in block {height}", details={"key": key.hex()}
            ) from exc

    def status_proof(self, chain: str, chain_height: int, *, at: int | None = None) -> StatusProof:
        """Prove the roots of ``chain`` block ``chain_height`` under a committed StatusRoot."""
        committed = self._status_height.get((chain, chain_height))
        target = self.height if at is None else self.block(at).height
        if committed is None or committed > target:
            raise NsbError("E_NOT_FOUND", f"no status for {chain}@{chain_height} at NSB height {target}")
        snapshot = self._snapshots[target]
        subtree = snapshot.subtrees[chain]
        return StatusProof(
            nsb_height=target,
            chain=chain,
            subtree=prove_membership(subtree, status_key(chain_height)),
            top=prove_membership(snapshot.top, chain.encode("utf-8")),
        )

    def status_committed_at(self, chain: str, chain_height: int) -> int | None:
        return self._status_height.get((chain, chain_height))

    def subtree_root(self, chain: str, height: int | None = None) -> bytes:
        target = self.height if height is None else self.block(height).height
        subtree = self._snapshots[target].subtrees.get(chain)
        return EMPTY_ROOT if subtree is None else subtree.root

    def submissions_for(self, tid: str) -> list[Submission]:
        return [item for item in self.submissions if item.tid == tid]

    # commands ----------------------------------------------------------------

    def add_action(self, cert: Certificate, *, submitter: str | None = None) -> bytes:
        """Stake ``cert``; it is committed under a later ActionRoot, subject to capacity."""
        if not cert.verify(self.keys):
            raise NsbError("E_BAD_SIGNATURE", f"certificate for {cert.tid[:16]} does not verify")
        key = cert.key()
        if key in self._pooled or key in self._committed:
            return key
        submission = Submission("action", key, cert.tid, submitter, self.height)
        self._pools.actions.append((cert, submission))
        self._pooled.add(key)
        self.submissions.append(submission)
        self.metrics.observe_nsb_submission(kind="action")
        log_event(
            LOGGER, "nsb_action_pooled", level=logging.DEBUG, sid=cert.payload.sid, kind=cert.kind.value, seq=cert.seq
        )
        return key

    def closure_claim(self, claim: StatusClaim, *, submitter: str | None = None) -> str:
        """Queue a status claim; peers review it when the next block is produced."""
        if (claim.chain, claim.height) in self._status_height:
            return "committed"
        if any(pooled.body() == claim.body() for pooled, _ in self._pools.claims):
            return "queued"
        submission = Submission("status", claim.encode(), claim.tid, submitter, self.height)
        self._pools.claims.append((claim, submission))
        self.submissions.append(submission)
        self.metrics.observe_nsb_submission(kind="status")
        return "queued"

    def watch_session(self, sid: str) -> None:
        """Mark transactions whose memo names ``sid`` as relevant for watching mode."""
        self._sessions.add(sid)

    def closure_watching(self) -> list[StatusClaim]:
        """Pool a claim for every newly finalized chain block that packages a relevant T~."""
        claims: list[StatusClaim] = []
        for chain_id in sorted(self.chains):
            chain = self.chains[chain_id]
            final = chain.height - chain.confirm_depth
            for height in range(self._watched[chain_id] + 1, final + 1):
                relevant = [
                    tx for tx in chain.transactions(height) if memo_session(tx.memo) in self._sessions
                ]
                if not relevant:
                    continue
                block = chain.block(height)
                claim = StatusClaim(
                    tx_id=relevant[0].tx_id,
                    chain=chain_id,
                    height=height,
                    tx_root=block.tx_root.hex(),
                    state_root=block.state_root.hex(),
                )
                if self.closure_claim(claim, submitter="nsb") == "queued":
                    claims.append(claim)
            self._watched[chain_id] = max(self._watched[chain_id], final)
        return claims

    def advance_epoch(self) -> NsbBlock:
        if self.config.watching:
            self.closure_watching()
        capacity = self.config.capacity
        actions, self._pools.actions = self._pools.actions[:capacity], self._pools.actions[capacity:]
        claims, self._pools.claims = self._pools.claims[:capacity], self._pools.claims[capacity:]
        committed_claims: list[StatusClaim] = []
        for claim, _ in claims:
            if (claim.chain, claim.height) in self._status_height:
                continue
            reviewed = self._review(claim)
            if count_valid(reviewed, self.keys) >= self.config.quorum.threshold:
                committed_claims.append(reviewed)
            else:
                log_event(
                    LOGGER,
                    "nsb_claim_rejected",
                    chain=claim.chain,
                    height=claim.height,
                    signatures=len(reviewed.signatures),
                    threshold=self.config.quorum.threshold,
                )
        for cert, _ in actions:
            self._pooled.discard(cert.key())
        included = tuple(item for _, item in actions) + tuple(item for _, item in claims)
        block = self._seal(
            actions=tuple(cert for cert, _ in actions), claims=tuple(committed_claims), included=included
        )
        log_event(
            LOGGER,
            "nsb_block_appended",
            level=logging.DEBUG,
            height=block.height,
            actions=len(actions),
            claims=len(committed_claims),
            rolled_over=len(self._pools.actions) + len(self._pools.claims),
        )
        return block

    def _review(self, claim: StatusClaim) -> StatusClaim:
        signatures = list(claim.signatures)
        for peer in self.peers:
            signature = peer.review(claim, self.chains)
            if signature is not None:
                signatures.append(signature)
        return claim.model_copy(update={"signatures": tuple(signatures)})

    def _seal(
        self,
        *,
        actions: tuple[Certificate, ...],
        claims: tuple[StatusClaim, ...],
        included: tuple[Submission, ...],
    ) -> NsbBlock:
        height = len(self._blocks)
        for claim in claims:
            header = status_value(claim.height, bytes.fromhex(claim.tx_root), bytes.fromhex(claim.state_root))
            self._status.setdefault(claim.chain, {})[claim.height] = header
            self._status_height[(claim.chain, claim.height)] = height
            log_event(LOGGER, "nsb_claim_committed", chain=claim.chain, chain_height=claim.height, nsb_height=height)
        subtrees = {
            chain: build(((status_key(h), header) for h, header in entries.items()), sorted=True)
            for chain, entries in self._status.items()
        }
        top = build(((chain.encode("utf-8"), tree.root) for chain, tree in subtrees.items()), sorted=True)
        action_tree = build(((cert.key(), cert.encode()) for cert in actions), sorted=True)
        tx_tree = build((index.to_bytes(4, "big") + item.encode(), b"") for index, item in enumerate(included))
        prev = self._blocks[-1].digest().hex() if self._blocks else "00" * 32
        block = NsbBlock(
            height=height,
            prev=prev,
            tx_root=tx_tree.root,
            action_root=action_tree.root,
            status_root=top.root,
            action_keys=tuple(action_tree.keys()),
            status_entries=tuple((claim.chain, claim.height) for claim in claims),
        )
        for cert in actions:
            self._committed[cert.key()] = height
        self._blocks.append(block)
        self._action_trees.append(action_tree)
        self._actions.append(tuple(sorted(actions, key=lambda cert: cert.key())))
        self._snapshots.append(_StatusSnapshot(top=top, subtrees=subtrees))
        return block


__all__ = ["Nsb"]
