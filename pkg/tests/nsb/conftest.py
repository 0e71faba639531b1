from __future__ import annotations

from typing import Callable

import pytest

from src.core.models import Party, TransState
from src.core.utils import KeyDirectory, SigningKey
from src.domain.attestation import CertPayload, Certificate, issue, session_memo, tid_of
from src.domain.chain import Chain, OnChainTransaction, parse_genesis
from src.domain.compiler import AccountRef, PaymentPayload, TransactionWrapper, WrapperMeta
from src.domain.nsb import Nsb, NsbConfig, QuorumConfig, StatusClaim, peer_id

SID = "nsb-tests"

GENESIS = {
    "chains": [
        {
            "chain_id": chain_id,
            "confirm_depth": 1,
            "accounts": [
                {"address": "0xa1", "owner": "client", "balances": {"coin": 100}},
                {"address": "0xb2", "owner": "ves", "balances": {"coin": 100}},
            ],
        }
        for chain_id in ("ChainX", "ChainY")
    ]
}


@pytest.fixture()
def party_keys() -> dict[str, SigningKey]:
    return {owner: SigningKey.derive(owner, SID) for owner in ("client", "ves")}


def _peer_keys(count: int) -> list[SigningKey]:
    return [SigningKey.derive(peer_id(index), SID) for index in range(count)]


@pytest.fixture()
def keys(party_keys: dict[str, SigningKey]) -> KeyDirectory:
    directory = KeyDirectory()
    for key in [*party_keys.values(), *_peer_keys(8)]:
        directory.register(key)
    return directory


@pytest.fixture()
def chains(keys: KeyDirectory) -> dict[str, Chain]:
    return {genesis.chain_id: Chain(genesis, keys) for genesis in parse_genesis(GENESIS).chains}


NsbFactory = Callable[..., Nsb]


@pytest.fixture()
def make_nsb(chains: dict[str, Chain], keys: KeyDirectory) -> NsbFactory:
    def factory(
        *,
        peers: int = 3,
        threshold: int = 2,
        dishonest: frozenset[int] = frozenset(),
        capacity: int = 64,
        watching: bool = False,
    ) -> Nsb:
        config = NsbConfig(
            quorum=QuorumConfig(peers=peers, threshold=threshold, dishonest=dishonest),
            capacity=capacity,
            watching=watching,
        )
        return Nsb(config, chains=chains, keys=keys, peer_keys=_peer_keys(peers))

    return factory


@pytest.fixture()
def nsb(make_nsb: NsbFactory) -> Nsb:
    return make_nsb()


def wrapper(seq: int = 1, value: int = 10) -> TransactionWrapper:
    return TransactionWrapper(
        from_=AccountRef(chain="ChainX", address="0xa1", name="a1", owner=Party.CLIENT),
        to=AccountRef(chain="ChainX", address="0xb2", name="relay@ChainX", owner=Party.VES, kind="relay"),
        seq=seq,
        meta=WrapperMeta(
            amt=value,
            dst="0xc11e00",
            payload=PaymentPayload(value=value, unit="coin"),
            deadline_blocks=10,
            chain="ChainX",
            op=f"op{seq}",
        ),
    )


def init_cert(key: SigningKey, seq: int = 1) -> Certificate:
    item = wrapper(seq)
    return issue(CertPayload(sid=SID, tid=tid_of(item), state=TransState.INIT, wrapper=item), key)


def post_transfer(
    chain: Chain, key: SigningKey, nonce: int, *, value: int = 5, memo: str | None = None
) -> OnChainTransaction:
    tx = OnChainTransaction(
        chain=chain.chain_id,
        from_="0xa1",
        to="0xb2",
        value=value,
        unit="coin",
        nonce=nonce,
        signer=key.owner,
        memo=session_memo(SID, nonce) if memo is None else memo,
    ).signed(key)
    chain.exec(tx)
    return tx


def claim_for(chain: Chain, tx: OnChainTransaction, height: int) -> StatusClaim:
    block = chain.block(height)
    return StatusClaim(
        tx_id=tx.tx_id,
        chain=chain.chain_id,
        height=height,
        tx_root=block.tx_root.hex(),
        state_root=block.state_root.hex(),
    )
