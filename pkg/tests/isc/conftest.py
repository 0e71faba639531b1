from __future__ import annotations

from dataclasses import dataclass

import pytest

from src.core.models import Party, TransState
from src.core.utils import KeyDirectory, SigningKey
from src.domain.attestation import (
    Certificate,
    CertPayload,
    FinalityProof,
    MerkleAttestation,
    build_transaction,
    issue,
    tid_of,
)
from src.domain.chain import Chain, ContractCall, OnChainTransaction, parse_genesis
from src.domain.compiler import AccountRef, PaymentPayload, SessionParams, Tdg, TransactionWrapper, WrapperMeta
from src.domain.isc import STAKE_METHOD, InsuranceArbitrator, TimerConfig
from src.domain.nsb import Nsb, NsbConfig, QuorumConfig, StatusClaim, peer_id

SID = "isc-tests"
ESCROW = "0x15c000"
REFUNDS = {Party.VES: "0x7e5000", Party.CLIENT: "0xc11e00"}

GENESIS = {
    "chains": [
        {
            "chain_id": "ChainX",
            "confirm_depth": 1,
            "accounts": [
                {"address": "0x7019a1", "owner": "client", "balances": {"xcoin": 100}},
                {"address": "0x5e1a00", "owner": "ves", "balances": {"xcoin": 100}},
            ],
        },
        {
            "chain_id": "ChainN",
            "confirm_depth": 1,
            "accounts": [
                {"address": "0x7e5000", "owner": "ves", "balances": {"ncoin": 100}},
                {"address": "0xc11e00", "owner": "client", "balances": {"ncoin": 100}},
            ],
            "contracts": [{"address": ESCROW, "handler": "isc_escrow", "owner": "isc"}],
        },
    ]
}


def transfer(seq: int, origin: Party, amt: int) -> TransactionWrapper:
    """A payment between the origin's account and the counterpart's relay on ChainX."""
    own, other = ("0x7019a1", "0x5e1a00") if origin is Party.CLIENT else ("0x5e1a00", "0x7019a1")
    return TransactionWrapper(
        from_=AccountRef(chain="ChainX", address=own, name=f"s{seq}", owner=origin),
        to=AccountRef(chain="ChainX", address=other, name=f"r{seq}", owner=origin.counterpart),
        seq=seq,
        meta=WrapperMeta(
            amt=amt,
            dst=REFUNDS[origin],
            payload=PaymentPayload(value=amt, unit="xcoin"),
            deadline_blocks=10,
            chain="ChainX",
            op=f"op{seq}",
        ),
    )


def dag_tdg(count: int, edges: tuple[tuple[int, int], ...]) -> Tdg:
    wrappers = tuple(transfer(seq, Party.CLIENT if seq % 2 else Party.VES, seq) for seq in range(1, count + 1))
    return Tdg(
        wrappers=wrappers,
        edges=tuple(sorted(edges)),
        session=SessionParams(isc_chain="ChainN", isc_unit="ncoin", default_deadline_blocks=30),
    )


def small_tdg() -> Tdg:
    """T1 client pays 10, then T2 (VES pays 4) and T3 (client pays 6) both follow T1."""
    return Tdg(
        wrappers=(transfer(1, Party.CLIENT, 10), transfer(2, Party.VES, 4), transfer(3, Party.CLIENT, 6)),
        edges=((1, 2), (1, 3)),
        session=SessionParams(isc_chain="ChainN", isc_unit="ncoin", default_deadline_blocks=30),
    )


@dataclass
class IscBed:
    keys: KeyDirectory
    party_keys: dict[Party, SigningKey]
    chains: dict[str, Chain]
    nsb: Nsb
    isc: InsuranceArbitrator
    tdg: Tdg

    def advance(self, blocks: int = 1) -> None:
        for _ in range(blocks):
            for chain in self.chains.values():
                chain.advance_epoch()
            self.nsb.advance_epoch()

    def activate(self, cid: str) -> None:
        contract = self.isc.contract(cid)
        for party, required in contract.requirements.items():
            self.isc.stake_fund(cid, party, required)
        self.isc.activate_ready()

    def cert(
        self,
        seq: int,
        state: TransState,
        *,
        signers: tuple[Party, ...],
        ts: int | None = None,
        sid: str = SID,
    ) -> Certificate:
        wrapper = self.tdg.wrapper(seq)
        tx = None
        if state is not TransState.INIT:
            tx = build_transaction(wrapper, sid=sid, values={}).signed(self.party_keys[wrapper.originator])
        payload = CertPayload(
            sid=sid,
            tid=tid_of(wrapper),
            state=state,
            wrapper=wrapper,
            tx=tx,
            ts_open=ts if state is TransState.OPEN else None,
            ts_closed=ts if state is TransState.CLOSED else None,
        )
        cert = issue(payload, self.party_keys[signers[0]])
        for signer in signers[1:]:
            cert = cert.countersign(self.party_keys[signer])
        return cert

    def stake_on_chain(self, cid: str, party: Party, value: int) -> None:
        host = self.chains["ChainN"]
        source = REFUNDS[party]
        tx = OnChainTransaction(
            chain="ChainN",
            from_=source,
            to=ESCROW,
            value=value,
            unit="ncoin",
            call=ContractCall(method=STAKE_METHOD, args=(cid,)),
            nonce=host.next_nonce(source),
            signer=party.value,
        ).signed(self.party_keys[party])
        host.exec(tx)

    def staked(self, cert: Certificate) -> MerkleAttestation:
        self.nsb.add_action(cert)
        self.nsb.advance_epoch()
        return MerkleAttestation(cert=cert, action=self.nsb.merkle_proof(cert.key()))

    def closing(self, seq: int, *, signer: Party) -> MerkleAttestation:
        """Post T~ for ``seq``, finalize it and commit its block header to the NSB."""
        chain = self.chains["ChainX"]
        wrapper = self.tdg.wrapper(seq)
        tx = build_transaction(wrapper, sid=SID, values={}).signed(self.party_keys[wrapper.originator])
        chain.exec(tx)
        height = chain.advance_epoch().height
        chain.advance_epoch()
        block = chain.block(height)
        finality = FinalityProof(
            chain="ChainX",
            height=height,
            tx_root=block.tx_root,
            state_root=block.state_root,
            tx_proof=chain.merkle_proof(tx.tx_id).proof,
        )
        self.nsb.closure_claim(
            StatusClaim(
                tx_id=tx.tx_id,
                chain="ChainX",
                height=height,
                tx_root=block.tx_root.hex(),
                state_root=block.state_root.hex(),
            )
        )
        self.nsb.advance_epoch()
        request = self.cert(seq, TransState.CLOSED, signers=(signer,), ts=self.nsb.height)
        return MerkleAttestation(
            cert=request, finality=finality, status=self.nsb.status_proof("ChainX", height)
        )


def make_bed() -> IscBed:
    keys = KeyDirectory()
    party_keys = {party: SigningKey.derive(party.value, SID) for party in Party}
    isc_key = SigningKey.derive("isc", SID)
    peer_keys = [SigningKey.derive(peer_id(index), SID) for index in range(3)]
    for key in [*party_keys.values(), isc_key, *peer_keys]:
        keys.register(key)
    chains = {genesis.chain_id: Chain(genesis, keys) for genesis in parse_genesis(GENESIS).chains}
    nsb = Nsb(
        NsbConfig(quorum=QuorumConfig(peers=3, threshold=2)),
        chains=chains,
        keys=keys,
        peer_keys=peer_keys,
    )
    isc = InsuranceArbitrator(
        nsb=nsb,
        host=chains["ChainN"],
        escrow=ESCROW,
        key=isc_key,
        keys=keys,
        refund_accounts=REFUNDS,
        timers=TimerConfig(delta=3, settle_after_blocks=20, setup_timeout_blocks=6),
    )
    return IscBed(keys=keys, party_keys=party_keys, chains=chains, nsb=nsb, isc=isc, tdg=small_tdg())


@pytest.fixture()
def bed() -> IscBed:
    return make_bed()
