"""Wire one scenario into a running world: chains, NSB, ISC actor and both parties on one bus."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from src.core.errors import IscError
from src.core.models import Party
from src.core.utils import KeyDirectory, SigningKey, log_event
from src.domain.chain import Chain
from src.domain.isc import InsuranceArbitrator, SettlementRecord
from src.domain.netsim import Message, Network, RunOutcome
from src.domain.nsb import Nsb, peer_id
from src.domain.parties import (
    ISC_ENDPOINT,
    Claim,
    ClientParty,
    ContractCreated,
    ContractRequest,
    PartyContext,
    SessionActivated,
    VesParty,
    WatchingParty,
)
from src.domain.ports import NullMetrics, ProtocolMetrics

from .scenario import PreparedScenario

LOGGER = logging.getLogger(__name__)


def _escrow_owner(prepared: PreparedScenario) -> str:
    host = prepared.genesis.by_id()[prepared.tdg.session.isc_chain]
    escrow = next(item for item in host.contracts if item.address == prepared.scenario.escrow)
    assert escrow.owner is not None
    return escrow.owner


class IscActor:
    """Puts the arbitrator on the bus: contract requests and claims in, session notices out."""

    def __init__(self, arbitrator: InsuranceArbitrator, network: Network) -> None:
        self.arbitrator = arbitrator
        self.network = network
        self.parties: dict[str, tuple[str, ...]] = {}
        self.claim_errors: list[tuple[str, str]] = []
        network.register(ISC_ENDPOINT, self.receive)

    def receive(self, source: str, message: Message) -> None:
        if isinstance(message, ContractRequest):
            self.on_request(message)
        elif isinstance(message, Claim):
            self.on_claim(source, message)
        else:
            log_event(LOGGER, "isc_unexpected_message", level=logging.WARNING, source=source, kind=message.kind)

    def on_request(self, message: ContractRequest) -> None:
        try:
            cid, contract = self.arbitrator.create_contract(message.tdg, sid=message.sid)
        except IscError as exc:
            log_event(LOGGER, "isc_request_refused", level=logging.WARNING, sid=message.sid, code=exc.code)
            return
        self.parties[cid] = message.parties
        for party in message.parties:
            self.network.send(
                ISC_ENDPOINT, party, ContractCreated(message.sid, cid, message.tdg, contract.created_at)
            )

    def on_claim(self, source: str, message: Claim) -> None:
        try:
            self.arbitrator.insurance_claim(message.cid, message.attestation)
        except IscError as exc:
            self.claim_errors.append((source, exc.code))

    def step(self) -> list[SettlementRecord]:
        """Credit stakes, announce activations and settle whatever is due."""
        self.arbitrator.observe_stakes()
        for contract in self.arbitrator.activate_ready():
            assert contract.activated_at is not None and contract.timer is not None
            for party in self.parties.get(contract.cid, ()):
                self.network.send(
                    ISC_ENDPOINT,
                    party,
                    SessionActivated(contract.sid, contract.cid, contract.activated_at, contract.timer),
                )
        return self.arbitrator.due()


@dataclass
class World:
    prepared: PreparedScenario
    sid: str
    seed: int
    network: Network
    keys: KeyDirectory
    chains: dict[str, Chain]
    nsb: Nsb
    isc: IscActor
    ves: VesParty
    client: ClientParty

    @classmethod
    def build(cls, prepared: PreparedScenario, *, seed: int, metrics: ProtocolMetrics | None = None) -> "World":
        scenario, config = prepared.scenario, prepared.ves_config
        sink = metrics or NullMetrics()
        material = f"{scenario.name}/{seed}"
        network = Network(scenario.adversary, seed=seed, metrics=sink)
        keys = KeyDirectory()
        party_keys = {party: SigningKey.derive(party.value, material) for party in Party}
        isc_key = SigningKey.derive(_escrow_owner(prepared), material)
        peer_keys = [SigningKey.derive(peer_id(index), material) for index in range(prepared.nsb_config.quorum.peers)]
        for key in (*party_keys.values(), isc_key, *peer_keys):
            keys.register(key)
        chains = {
            genesis.chain_id: Chain(genesis, keys, metrics=sink, clock=lambda: network.now)
            for genesis in prepared.genesis.chains
        }
        nsb = Nsb(prepared.nsb_config, chains=chains, keys=keys, peer_keys=peer_keys, metrics=sink)
        host = chains[prepared.tdg.session.isc_chain]
        arbitrator = InsuranceArbitrator(
            nsb=nsb,
            host=host,
            escrow=scenario.escrow,
            key=isc_key,
            keys=keys,
            refund_accounts=config.refund_accounts,
            timers=scenario.timers,
            metrics=sink,
        )
        isc = IscActor(arbitrator, network)
        context = PartyContext(
            network=network,
            nsb=nsb,
            chains=chains,
            keys=keys,
            timers=scenario.timers,
            ves_config=config,
            escrow=scenario.escrow,
            metrics=sink,
        )
        script = scenario.adversary
        ves = VesParty(party_keys[Party.VES], context, corruption=script.corruption(Party.VES))
        client = ClientParty(party_keys[Party.CLIENT], context, corruption=script.corruption(Party.CLIENT))
        return cls(
            prepared=prepared,
            sid=f"{scenario.name}-{seed}",
            seed=seed,
            network=network,
            keys=keys,
            chains=chains,
            nsb=nsb,
            isc=isc,
            ves=ves,
            client=client,
        )

    @property
    def parties(self) -> tuple[WatchingParty, ...]:
        return (self.ves, self.client)

    @property
    def host(self) -> Chain:
        return self.isc.arbitrator.host

    def settlement(self) -> SettlementRecord | None:
        return next(
            (record for record in self.isc.arbitrator.settlements.values() if record.sid == self.sid), None
        )

    def finished(self) -> bool:
        return self.settlement() is not None and self.isc.arbitrator.payouts_final()

    def tick(self) -> None:
        """One logical tick: every chain seals a block, and every ``nsb_every`` ticks the NSB does too."""
        now = self.network.now
        nsb_block = now % self.prepared.scenario.clock.nsb_every == 0
        for chain_id in sorted(self.chains):
            self.chains[chain_id].advance_epoch()
        if nsb_block:
            self.nsb.advance_epoch()
            self.isc.step()
        for party in self.parties:
            party.tick(now)
            party.watch_chain()
        if nsb_block:
            for party in self.parties:
                self.network.schedule(0, f"watch_nsb:{party.name}", party.watch_nsb)
        if now == 0:
            self.ves.start_session(self.sid, self.prepared.tdg)
        if not self.finished():
            self.network.schedule(1, "tick", self.tick)

    def run(self) -> RunOutcome:
        self.network.schedule(0, "tick", self.tick)
        outcome = self.network.run_until(self.finished, self.prepared.scenario.clock.max_steps)
        log_event(
            LOGGER,
            "run_finished",
            sid=self.sid,
            steps=outcome.steps,
            capped=outcome.capped,
            nsb=self.nsb.height,
        )
        return outcome


__all__ = ["IscActor", "World"]
