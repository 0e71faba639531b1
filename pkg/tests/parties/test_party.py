from __future__ import annotations

import json
import logging

import pytest

from src.core.errors import PartyError
from src.core.models import CertKind, Party, TransState
from src.core.utils import SigningKey
from src.domain.attestation import CertPayload, issue
from src.domain.netsim import Corruption, CrashRule, Misbehaviour
from src.domain.parties import ClientParty, VesParty

from .conftest import PartyBed, make_bed


def test_party_refuses_a_key_of_another_owner(party_bed: PartyBed) -> None:
    context = party_bed.world.ves.context
    with pytest.raises(PartyError) as excinfo:
        VesParty(SigningKey.derive("client", "elsewhere"), context)
    assert excinfo.value.code == "E_KEY_OWNER"


def test_corruption_must_target_the_same_role(party_bed: PartyBed) -> None:
    context = party_bed.world.client.context
    with pytest.raises(PartyError) as excinfo:
        ClientParty(
            SigningKey.derive("client", "elsewhere"),
            context,
            corruption=Corruption(party=Party.VES, behaviours=(Misbehaviour(kind="understake"),)),
        )
    assert excinfo.value.code == "E_CORRUPTION_TARGET"


def test_both_parties_stake_and_activate(party_bed: PartyBed) -> None:
    party_bed.run_until(party_bed.both_active)

    ves, client = party_bed.ves_session(), party_bed.client_session()
    assert ves.cid == client.cid
    assert ves.staked == 50
    assert client.staked == 0
    assert ves.timer == client.timer
    assert ves.counterparty_ack is True


def test_start_session_is_idempotent(party_bed: PartyBed) -> None:
    party_bed.run_until(party_bed.both_active)
    world = party_bed.world

    again = world.ves.start_session(world.sid, world.prepared.tdg)

    assert again is party_bed.ves_session()
    assert len(world.isc.arbitrator.contracts) == 1


def test_first_transaction_reaches_closed_on_both_sides(party_bed: PartyBed) -> None:
    party_bed.run_until(
        lambda: min(party_bed.state(party, 1) for party in Party) >= TransState.CLOSED
    )

    for session in (party_bed.ves_session(), party_bed.client_session()):
        view = session.view(1)
        closed = view.certs.get(CertKind.CLOSED)
        assert (closed is not None and closed.dual_signed) or CertKind.CLOSED in view.merks
        assert view.finality is not None


def test_replayed_certificate_is_a_no_op(party_bed: PartyBed) -> None:
    party_bed.run_until(lambda: party_bed.state(Party.CLIENT, 1) >= TransState.OPENED)
    session = party_bed.client_session()
    cert = party_bed.ves_session().view(1).certs[CertKind.INIT]
    state, rejections = session.view(1).state, len(session.rejections)

    party_bed.world.client.on_certificate(session, cert)

    assert session.view(1).state is state
    assert len(session.rejections) == rejections


def test_certificate_addressed_to_the_other_role_is_rejected(
    party_bed: PartyBed, caplog: pytest.LogCaptureFixture
) -> None:
    party_bed.run_until(party_bed.both_active)
    world = party_bed.world
    session = party_bed.ves_session()
    stray = issue(
        CertPayload(
            sid=world.sid, tid=session.view(1).tid, state=TransState.INIT, wrapper=world.prepared.tdg.wrapper(1)
        ),
        world.client.key,
    )

    with caplog.at_level(logging.WARNING, logger="src.domain.parties.party"):
        world.ves.on_certificate(session, stray)

    assert ("E_UNEXPECTED_KIND", "init_trans", 1) in party_bed.rejections(Party.VES)
    events = [json.loads(item.getMessage()) for item in caplog.records if item.name == "src.domain.parties.party"]
    assert any(event["event"] == "party_rejection" and event["code"] == "E_UNEXPECTED_KIND" for event in events)


def test_forged_signature_is_rejected_by_the_client() -> None:
    bed = make_bed(Corruption(party=Party.VES, behaviours=(Misbehaviour(kind="forge", seqs=frozenset({1})),)))

    bed.run_until(lambda: bool(bed.rejections(Party.CLIENT)))

    assert ("E_BAD_SIGNATURE", "init_trans", 1) in bed.rejections(Party.CLIENT)
    assert bed.state(Party.CLIENT, 1) is TransState.UNKNOWN


def test_crash_on_receive_stops_the_party() -> None:
    bed = make_bed(Corruption(party=Party.CLIENT, crash=CrashRule(on_receive=CertKind.INIT, seq=1)))

    bed.run_until(lambda: bed.world.client.crashed)
    bed.run_until(lambda: bed.world.network.now >= 40)

    assert bed.state(Party.CLIENT, 1) is TransState.UNKNOWN
    assert bed.world.client.watch_chain() == 0


def test_withheld_open_leaves_the_transaction_at_inited() -> None:
    withhold = Misbehaviour(kind="withhold", hook="inited", seqs=frozenset({1}))
    bed = make_bed(Corruption(party=Party.VES, behaviours=(withhold,)))

    bed.run_until(lambda: bed.state(Party.VES, 1) >= TransState.INITED)
    bed.run_until(lambda: bed.world.network.now >= 60)

    assert bed.state(Party.VES, 1) is TransState.INITED
    assert bed.state(Party.CLIENT, 1) is TransState.INITED
    assert CertKind.OPEN not in bed.client_session().view(1).certs
