from __future__ import annotations

import pytest

from src.core.utils import KeyDirectory, SigningKey
from src.domain.chain import Chain, ChainGenesis, ContractCall, OnChainTransaction, parse_genesis

GENESIS = {
    "chains": [
        {
            "chain_id": "ChainX",
            "confirm_depth": 1,
            "accounts": [
                {"address": "0xa1", "owner": "client", "balances": {"xcoin": 100}},
                {"address": "0xb2", "owner": "ves", "balances": {"xcoin": 0}},
            ],
            "contracts": [{"address": "0xc1", "handler": "broker", "storage": {"QuotedPrice": "42"}}],
        }
    ]
}


@pytest.fixture()
def signing_keys() -> dict[str, SigningKey]:
    return {owner: SigningKey.derive(owner, "chain-tests") for owner in ("client", "ves", "isc")}


@pytest.fixture()
def key_directory(signing_keys: dict[str, SigningKey]) -> KeyDirectory:
    directory = KeyDirectory()
    for key in signing_keys.values():
        directory.register(key)
    return directory


@pytest.fixture()
def chain_genesis() -> ChainGenesis:
    return parse_genesis(GENESIS).chains[0]


@pytest.fixture()
def chain(chain_genesis: ChainGenesis, key_directory: KeyDirectory) -> Chain:
    return Chain(chain_genesis, key_directory)


def transfer(
    key: SigningKey, nonce: int, value: int = 50, *, sender: str = "0xa1", to: str = "0xb2"
) -> OnChainTransaction:
    return OnChainTransaction(
        chain="ChainX", from_=sender, to=to, value=value, unit="xcoin", nonce=nonce, signer=key.owner
    ).signed(key)


def invoke(key: SigningKey, nonce: int, method: str, *args: str, to: str = "0xc1") -> OnChainTransaction:
    return OnChainTransaction(
        chain="ChainX",
        from_="0xa1",
        to=to,
        unit="xcoin",
        call=ContractCall(method=method, args=args),
        nonce=nonce,
        signer=key.owner,
    ).signed(key)
