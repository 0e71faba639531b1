"""A minimal programmable blockchain with Merkle-committed blocks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal

from src.core.errors import ChainError, MerkleError
from src.core.utils import KeyDirectory, canonical_bytes, digest_of, log_event
from src.domain.merkle import MembershipProof, MerkleTree, build, prove_membership
from src.domain.ports import NullMetrics, ProtocolMetrics

from .genesis import ChainGenesis
from .handlers import HANDLERS, CallContext, HandlerError
from .transaction import OnChainTransaction

LOGGER = logging.getLogger(__name__)

TxState = Literal["not-found", "pending", "finalized"]


def balance_key(address: str, unit: str) -> bytes:
    return f"bal:{address}:{unit}".encode("utf-8")


def var_key(contract: str, var: str) -> bytes:
    return f"var:{contract}:{var}".encode("utf-8")


def tx_leaf_value(tx: OnChainTransaction, status: str) -> bytes:
    """The TxMT leaf value committed for ``tx``."""
    return canonical_bytes({"tx": tx, "status": status})


@dataclass(frozen=True)
class Receipt:
    tx_id: str
    status: Literal["ok", "failed"]
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class ChainBlock:
    chain: str
    height: int
    prev: str
    tx_root: bytes
    state_root: bytes
    tx_ids: tuple[str, ...]
    receipts: tuple[Receipt, ...]
    time: int = 0

    def digest(self) -> bytes:
        return digest_of(
            {
                "chain": self.chain,
                "height": self.height,
                "prev": self.prev,
                "tx_root": self.tx_root,
                "state_root": self.state_root,
            }
        )


@dataclass(frozen=True)
class TxStatus:
    state: TxState
    height: int | None = None
    receipt: Receipt | None = None

    @property
    def finalized(self) -> bool:
        return self.state == "finalized"


@dataclass(frozen=True)
class ChainProof:
    """A membership proof plus the block whose root it verifies against."""

    height: int
    tree: Literal["tx", "state"]
    proof: MembershipProof


@dataclass
class _Pending:
    tx: OnChainTransaction
    arrival: int


@dataclass
class _WorldState:
    balances: dict[tuple[str, str], int] = field(default_factory=dict)
    storage: dict[tuple[str, str], str] = field(default_factory=dict)

    def copy(self) -> "_WorldState":
        return _WorldState(dict(self.balances), dict(self.storage))

    def leaves(self) -> list[tuple[bytes, bytes]]:
        items = [(balance_key(addr, unit), str(amount).encode()) for (addr, unit), amount in self.balances.items()]
        items += [(var_key(contract, var), value.encode("utf-8")) for (contract, var), value in self.storage.items()]
        return items


class Chain:
    """Single-owner mutable chain driven by the simulation scheduler."""

    def __init__(
        self,
        genesis: ChainGenesis,
        keys: KeyDirectory,
        *,
        metrics: ProtocolMetrics | None = None,
        clock: Callable[[], int] | None = None,
    ) -> None:
        self.chain_id = genesis.chain_id
        self.confirm_depth = genesis.confirm_depth
        self.keys = keys
        self.metrics = metrics or NullMetrics()
        self._clock = clock or (lambda: 0)
        self.owners: dict[str, str] = {account.address: account.owner for account in genesis.accounts}
        self.contracts: dict[str, str] = {contract.address: contract.handler for contract in genesis.contracts}
        for contract in genesis.contracts:
            if contract.owner is not None:
                self.owners[contract.address] = contract.owner
        self._state = _WorldState()
        for account in genesis.accounts:
            for unit, amount in account.balances.items():
                self._state.balances[(account.address, unit)] = amount
        for contract in genesis.contracts:
            for var, value in contract.storage.items():
                self._state.storage[(contract.address, var)] = value
        self._pending: list[_Pending] = []
        self._arrivals = 0
        self._used_nonces: set[tuple[str, int]] = set()
        self._blocks: list[ChainBlock] = []
        self._tx_trees: list[MerkleTree] = []
        self._state_trees: list[MerkleTree] = []
        self._included: list[tuple[OnChainTransaction, ...]] = []
        self._tx_index: dict[str, tuple[int, Receipt]] = {}
        self._seal(txs=(), receipts=())

    # queries -----------------------------------------------------------------

    @property
    def height(self) -> int:
        return self._blocks[-1].height

    def block_height(self) -> int:
        return self.height

    def block(self, height: int) -> ChainBlock:
        if not 0 <= height <= self.height:
            raise ChainError("E_NOT_FOUND", f"{self.chain_id} has no block {height}")
        return self._blocks[height]

    def transactions(self, height: int) -> tuple[OnChainTransaction, ...]:
        self.block(height)
        return self._included[height]

    def balance(self, address: str, unit: str) -> int:
        return self._state.balances.get((address, unit), 0)

    def state_value(self, contract: str, var: str, height: int | None = None) -> str | None:
        if height is None:
            return self._state.storage.get((contract, var))
        raw = self._state_trees[self.block(height).height].get(var_key(contract, var))
        return None if raw is None else raw.decode("utf-8")

    def next_nonce(self, address: str) -> int:
        used = [nonce for sender, nonce in self._used_nonces if sender == address]
        used += [item.tx.nonce for item in self._pending if item.tx.from_ == address]
        return max(used, default=-1) + 1

    def query_status(self, tx_id: str) -> TxStatus:
        entry = self._tx_index.get(tx_id)
        if entry is not None:
            height, receipt = entry
            if self.height - height >= self.confirm_depth:
                return TxStatus("finalized", height, receipt)
            return TxStatus("pending", height, receipt)
        if any(item.tx.tx_id == tx_id for item in self._pending):
            return TxStatus("pending")
        return TxStatus("not-found")

    def merkle_proof(self, key: bytes | str, height: int | None = None) -> ChainProof:
        """Prove a transaction id (TxMT) or a state key (StateMT)."""
        if isinstance(key, str):
            entry = self._tx_index.get(key)
            if entry is None:
                raise ChainError("E_NOT_FOUND", f"transaction {key[:16]} is not on {self.chain_id}")
            tx_height = entry[0]
            if height is not None and height != tx_height:
                raise ChainError("E_NOT_FOUND", f"transaction {key[:16]} is not in block {height}")
            return ChainProof(tx_height, "tx", prove_membership(self._tx_trees[tx_height], bytes.fromhex(key)))
        target = self.height if height is None else self.block(height).height
        try:
            return ChainProof(target, "state", prove_membership(self._state_trees[target], key))
        except MerkleError as exc:
            raise ChainError("E_NOT_FOUND", f"state key {key!r} absent at height {target}") from exc

    # transitions -------------------------------------------------------------

    def exec(self, tx: OnChainTransaction) -> str:
        """Admit a signed transaction into the pending pool and return its id.

        A nonce is rejected only when it was already executed or is already pending for the sender.
        Gaps and lower unused nonces are admitted since a transaction nonce is its wrapper sequence
        number. Admitted transactions execute in (nonce, arrival) order at the next epoch.
        """
        if tx.chain != self.chain_id:
            raise ChainError("E_WRONG_CHAIN", f"transaction for {tx.chain} sent to {self.chain_id}")
        owner = self.owners.get(tx.from_)
        if owner is None:
            raise ChainError("E_UNKNOWN_SENDER", f"{tx.from_} has no signing owner on {self.chain_id}")
        if tx.signer != owner or not self.keys.verify(owner, tx.body(), tx.signature):
            raise ChainError("E_BAD_SIGNATURE", f"transaction {tx.tx_id[:16]} is not signed by {owner}")
        pending_nonces = {(item.tx.from_, item.tx.nonce) for item in self._pending}
        if (tx.from_, tx.nonce) in self._used_nonces or (tx.from_, tx.nonce) in pending_nonces:
            raise ChainError("E_BAD_NONCE", f"nonce {tx.nonce} already used by {tx.from_}")
        if tx.call is not None and tx.to not in self.contracts:
            raise ChainError("E_UNKNOWN_CONTRACT", f"no contract at {tx.to} on {self.chain_id}")
        self._pending.append(_Pending(tx, self._arrivals))
        self._arrivals += 1
        log_event(LOGGER, "chain_tx_queued", level=logging.DEBUG, chain=self.chain_id, tx=tx.tx_id[:16], memo=tx.memo)
        return tx.tx_id

    def advance_epoch(self) -> ChainBlock:
        """Execute the pending pool in (nonce, arrival) order and append a block."""
        ordered = sorted(self._pending, key=lambda item: (item.tx.nonce, item.arrival))
        self._pending = []
        receipts: list[Receipt] = []
        for item in ordered:
            receipts.append(self._apply(item.tx))
            self._used_nonces.add((item.tx.from_, item.tx.nonce))
        block = self._seal(txs=tuple(item.tx for item in ordered), receipts=tuple(receipts))
        self.metrics.observe_chain_block(chain=self.chain_id)
        log_event(
            LOGGER,
            "chain_block_appended",
            level=logging.DEBUG,
            chain=self.chain_id,
            height=block.height,
            txs=len(ordered),
            failed=sum(1 for receipt in receipts if not receipt.ok),
        )
        return block

    def _apply(self, tx: OnChainTransaction) -> Receipt:
        draft = self._state.copy()
        if tx.value:
            held = draft.balances.get((tx.from_, tx.unit), 0)
            if held < tx.value:
                return Receipt(tx.tx_id, "failed", "E_INSUFFICIENT_FUNDS")
            draft.balances[(tx.from_, tx.unit)] = held - tx.value
            draft.balances[(tx.to, tx.unit)] = draft.balances.get((tx.to, tx.unit), 0) + tx.value
        if tx.call is not None:
            storage = {var: value for (contract, var), value in draft.storage.items() if contract == tx.to}
            context = CallContext(
                method=tx.call.method,
                args=tx.call.args,
                caller=tx.from_,
                value=tx.value,
                unit=tx.unit,
                storage=storage,
            )
            try:
                updates = HANDLERS[self.contracts[tx.to]](context)
            except HandlerError as exc:
                return Receipt(tx.tx_id, "failed", exc.code)
            for var, value in updates.items():
                draft.storage[(tx.to, var)] = value
        self._state = draft
        return Receipt(tx.tx_id, "ok")

    def _seal(self, *, txs: tuple[OnChainTransaction, ...], receipts: tuple[Receipt, ...]) -> ChainBlock:
        height = len(self._blocks)
        tx_tree = build(
            (bytes.fromhex(tx.tx_id), tx_leaf_value(tx, receipt.status))
            for tx, receipt in zip(txs, receipts)
        )
        state_tree = build(self._state.leaves(), sorted=True)
        prev = self._blocks[-1].digest().hex() if self._blocks else "00" * 32
        block = ChainBlock(
            chain=self.chain_id,
            height=height,
            prev=prev,
            tx_root=tx_tree.root,
            state_root=state_tree.root,
            tx_ids=tuple(tx.tx_id for tx in txs),
            receipts=receipts,
            time=self._clock(),
        )
        self._blocks.append(block)
        self._tx_trees.append(tx_tree)
        self._state_trees.append(state_tree)
        self._included.append(txs)
        for receipt in receipts:
            self._tx_index[receipt.tx_id] = (height, receipt)
        return block


__all__ = [
    "Chain",
    "ChainBlock",
    "ChainProof",
    "Receipt",
    "TxStatus",
    "balance_key",
    "tx_leaf_value",
    "var_key",
]
