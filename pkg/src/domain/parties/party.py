"""Protocol party actor: session setup, certificate handlers and dual-medium delivery."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Iterator, Mapping

from src.core.errors import ChainError, NsbError, PartyError
from src.core.models import CertKind, Party, TransState
from src.core.utils import KeyDirectory, SigningKey, log_event
from src.domain.attestation import (
    CertPayload,
    Certificate,
    FinalityProof,
    StateEvidence,
    associated,
    build_transaction,
    issue,
    state_key,
)
from src.domain.chain import Chain, ContractCall, OnChainTransaction, var_key
from src.domain.compiler import Tdg, TransactionWrapper, VesConfig, stake_requirements
from src.domain.isc import STAKE_METHOD, TimerConfig, contract_id, fresh
from src.domain.netsim import Corruption, Hook, Message, Misbehaviour, MisbehaviourKind, Network
from src.domain.nsb import Nsb
from src.domain.ports import NullMetrics, ProtocolMetrics

from .messages import CertMessage, ContractAck, ContractCreated, SessionActivated
from .session import Rejection, Session, TidView

LOGGER = logging.getLogger(__name__)

ISC_ENDPOINT = "isc"

Evidence = Mapping[int, FinalityProof]


@dataclass
class PartyContext:
    """The world a party reads and writes through."""

    network: Network
    nsb: Nsb
    chains: Mapping[str, Chain]
    keys: KeyDirectory
    timers: TimerConfig
    ves_config: VesConfig
    escrow: str
    metrics: ProtocolMetrics = field(default_factory=NullMetrics)

    @property
    def host(self) -> Chain:
        return self.chains[self.ves_config.isc_chain]


class ProtocolParty:
    """Shared state machine of the VES and the dApp client.

    Certificate handlers are named after the certificate they consume. A refusal is
    recorded as a ``Rejection`` and never propagates to the bus.
    """

    role: ClassVar[Party]

    _RECEIVER: ClassVar[dict[CertKind, str]] = {
        CertKind.INIT: "originator",
        CertKind.INITED: "destination",
        CertKind.OPEN: "originator",
        CertKind.OPENED: "destination",
        CertKind.CLOSE_REQUEST: "destination",
        CertKind.CLOSED: "originator",
    }
    _HANDLER: ClassVar[dict[CertKind, str]] = {
        CertKind.INIT: "init_trans",
        CertKind.INITED: "inited_trans",
        CertKind.OPEN: "open_trans",
        CertKind.OPENED: "opened_trans",
        CertKind.CLOSE_REQUEST: "closed_trans",
        CertKind.CLOSED: "close_confirmed",
    }

    def __init__(self, key: SigningKey, context: PartyContext, *, corruption: Corruption | None = None) -> None:
        if key.owner != self.role.value:
            raise PartyError("E_KEY_OWNER", f"{self.role.value} cannot sign with a key for {key.owner}")
        if corruption is not None and corruption.party is not self.role:
            raise PartyError(
                "E_CORRUPTION_TARGET", f"corruption for {corruption.party.value} given to {self.role.value}"
            )
        self.key = key
        self.context = context
        self.corruption = corruption
        self.sessions: dict[str, Session] = {}
        self.crashed = False
        self._scanned = context.nsb.height
        context.network.register(self.name, self.receive)

    @property
    def name(self) -> str:
        return self.role.value

    @property
    def peer(self) -> str:
        return self.role.counterpart.value

    @property
    def nsb(self) -> Nsb:
        return self.context.nsb

    def watches(self, view: TidView) -> bool:
        """Whether the chain watcher follows ``view``; the client only follows its own transactions."""
        return view.wrapper.originator is self.role

    # faults ------------------------------------------------------------------

    def _misbehaves(
        self, kind: MisbehaviourKind, seq: int | None = None, hook: Hook | None = None
    ) -> Misbehaviour | None:
        if self.corruption is None:
            return None
        return self.corruption.find(kind, seq, hook)

    def _withholds(self, hook: Hook, seq: int | None) -> bool:
        if self._misbehaves("withhold", seq, hook) is None:
            return False
        log_event(LOGGER, "party_withheld", level=logging.DEBUG, party=self.name, hook=hook, seq=seq)
        return True

    def crash(self, reason: str) -> None:
        if self.crashed:
            return
        self.crashed = True
        log_event(LOGGER, "party_crashed", level=logging.WARNING, party=self.name, reason=reason)

    def tick(self, now: int) -> None:
        crash = self.corruption.crash if self.corruption else None
        if crash is not None and crash.at_tick is not None and now >= crash.at_tick:
            self.crash(f"tick {now}")

    def _crash_on(self, cert: Certificate) -> bool:
        crash = self.corruption.crash if self.corruption else None
        if crash is not None and crash.on_receive is cert.kind and crash.seq in (None, cert.seq):
            self.crash(f"received {cert.kind.value} for T{cert.seq}")
        return self.crashed

    # inbound -----------------------------------------------------------------

    def receive(self, source: str, message: Message) -> None:
        if self.crashed:
            return
        if isinstance(message, CertMessage):
            session = self.sessions.get(message.cert.payload.sid)
            if session is None:
                log_event(
                    LOGGER,
                    "party_unknown_session",
                    level=logging.WARNING,
                    party=self.name,
                    sid=message.cert.payload.sid,
                )
                return
            self.on_certificate(session, message.cert, evidence=dict(message.evidence), via="channel")
        elif isinstance(message, ContractCreated):
            self.on_contract_created(message)
        elif isinstance(message, ContractAck):
            self.on_contract_ack(message)
        elif isinstance(message, SessionActivated):
            self.on_activated(message)
        else:
            log_event(LOGGER, "party_unexpected_message", level=logging.WARNING, party=self.name, kind=message.kind)

    def on_certificate(
        self, session: Session, cert: Certificate, *, evidence: Evidence | None = None, via: str = "channel"
    ) -> None:
        """Route a certificate from either medium to its handler; byte-identical repeats are no-ops."""
        if self.crashed or self._crash_on(cert):
            return
        key = cert.key()
        if key in session.known:
            return
        session.known.add(key)
        handler = self._HANDLER[cert.kind]
        try:
            view = self._admit(session, cert)
            if view is None:
                return
            getattr(self, handler)(session, view, cert, evidence or {})
        except PartyError as exc:
            self.reject(session, cert.tid, exc.code, handler, seq=cert.seq, detail=exc.message)
            return
        log_event(
            LOGGER,
            "party_certificate",
            level=logging.DEBUG,
            sid=session.sid,
            party=self.name,
            kind=cert.kind.value,
            seq=cert.seq,
            via=via,
        )

    def _admit(self, session: Session, cert: Certificate) -> TidView | None:
        view = session.view_for(cert.tid)
        if view is None:
            raise PartyError("E_UNKNOWN_TID", f"{cert.tid[:16]} is not part of session {session.sid}")
        if cert.payload.wrapper != view.wrapper:
            raise PartyError("E_ASSOCIATION", f"certificate wrapper differs from T{view.seq}")
        if not cert.verify(self.context.keys):
            raise PartyError("E_BAD_SIGNATURE", f"{cert.kind.value} for T{view.seq} does not verify")
        receiver = view.wrapper.originator if self._RECEIVER[cert.kind] == "originator" else view.wrapper.destination
        if receiver is not self.role:
            raise PartyError("E_UNEXPECTED_KIND", f"{cert.kind.value} for T{view.seq} is addressed to {receiver.value}")
        if cert.kind in view.certs:
            raise PartyError("E_EQUIVOCATION", f"a different {cert.kind.value} for T{view.seq} is already held")
        if view.state >= cert.kind.state:
            view.certs[cert.kind] = cert
            return None
        return view

    def reject(
        self, session: Session, tid: str, code: str, handler: str, *, seq: int | None = None, detail: str = ""
    ) -> None:
        session.rejections.append(Rejection(code=code, tid=tid, handler=handler, seq=seq))
        log_event(
            LOGGER,
            "party_rejection",
            level=logging.WARNING,
            sid=session.sid,
            party=self.name,
            handler=handler,
            code=code,
            seq=seq,
            detail=detail,
        )

    def _attempt(self, session: Session, view: TidView, handler: str, action: Callable[[], None]) -> bool:
        try:
            action()
        except PartyError as exc:
            self.reject(session, view.tid, exc.code, handler, seq=view.seq, detail=exc.message)
            return False
        return True

    # certificate handlers ----------------------------------------------------

    def init_trans(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        """Cert^i from the VES: compute, sign and announce T~ as Cert^id."""
        self._expect_signers(cert, {Party.VES})
        view.certs[CertKind.INIT] = cert
        view.advance(TransState.INIT)
        if self._withholds("init", view.seq):
            return
        self._emit_inited(session, view, evidence)

    def inited_trans(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        """Cert^id from the originator: check T~ and answer with a timestamped Cert^o."""
        wrapper = view.wrapper
        self._expect_signers(cert, {wrapper.originator})
        tx = cert.payload.tx
        assert tx is not None
        if tx.signer != wrapper.originator.value or not self.context.keys.verify(tx.signer, tx.body(), tx.signature):
            raise PartyError("E_BAD_SIGNATURE", f"T~ for T{view.seq} is not signed by {wrapper.originator.value}")
        self._require_preconditions(session, view)
        values = self._upstream_values(session, wrapper, evidence)
        if not associated(wrapper, tx, sid=session.sid, values=values):
            raise PartyError("E_ASSOCIATION", f"T~ is not the transaction T{view.seq} yields over proven state")
        view.tx = tx
        view.certs[CertKind.INITED] = cert
        view.advance(TransState.INITED)
        if self._withholds("inited", view.seq):
            return
        ts_open = self._timestamp(view.seq)
        request = self._issue(
            session,
            CertPayload(sid=session.sid, tid=view.tid, state=TransState.OPEN, wrapper=wrapper, tx=tx, ts_open=ts_open),
        )
        view.ts_open = ts_open
        view.certs[CertKind.OPEN] = request
        view.advance(TransState.OPEN)
        self._dual_send(session, request)

    def open_trans(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        """Cert^o from the destination: countersign Cert^od and post T~."""
        self._expect_signers(cert, {view.wrapper.destination})
        self._expect_own_tx(view, cert)
        ts_open = cert.payload.ts_open
        if not fresh(ts_open, self.nsb.height, self.context.timers.delta):
            raise PartyError("E_STALE_TIMESTAMP", f"ts_open {ts_open} is outside the window at NSB {self.nsb.height}")
        view.ts_open = ts_open
        view.certs[CertKind.OPEN] = cert
        view.advance(TransState.OPEN)
        if self._withholds("open", view.seq):
            return
        opened = self._countersign(session, cert)
        view.certs[CertKind.OPENED] = opened
        view.advance(TransState.OPENED)
        self._dual_send(session, opened)
        self._schedule_post(session, view)

    def opened_trans(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        self._expect_signers(cert, set(Party))
        self._expect_own_tx(view, cert)
        if cert.payload.ts_open != view.ts_open:
            raise PartyError("E_TIMESTAMP_MISMATCH", f"Cert^od for T{view.seq} carries a different ts_open")
        view.certs[CertKind.OPENED] = cert
        view.advance(TransState.OPENED)

    def closed_trans(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        """A close request: confirm finality independently, then dual-sign Cert^c."""
        self._expect_signers(cert, {view.wrapper.originator})
        if view.state < TransState.OPEN:
            raise PartyError("E_UNEXPECTED_STATE", f"close request for T{view.seq} at {view.state.value}")
        self._expect_own_tx(view, cert)
        finality = self._observe_finality(session, view)
        if finality is None:
            raise PartyError("E_NOT_FINAL", f"T~ for T{view.seq} is not finalized on {view.wrapper.meta.chain}")
        if dict(cert.payload.state_values) != finality.values():
            raise PartyError("E_STATE_MISMATCH", f"close request for T{view.seq} misreports the resulting state")
        ts_closed = cert.payload.ts_closed
        if not fresh(ts_closed, self.nsb.height, self.context.timers.delta):
            raise PartyError(
                "E_STALE_TIMESTAMP", f"ts_closed {ts_closed} is outside the window at NSB {self.nsb.height}"
            )
        view.certs[CertKind.CLOSE_REQUEST] = cert
        view.ts_closed = ts_closed
        closed = self._countersign(session, cert)
        view.certs[CertKind.CLOSED] = closed
        view.advance(TransState.CLOSED)
        self._dual_send(session, closed)

    def close_confirmed(self, session: Session, view: TidView, cert: Certificate, evidence: Evidence) -> None:
        self._expect_signers(cert, set(Party))
        self._expect_own_tx(view, cert)
        if cert.payload.ts_closed != view.ts_closed:
            raise PartyError("E_TIMESTAMP_MISMATCH", f"Cert^c for T{view.seq} carries a different ts_closed")
        view.certs[CertKind.CLOSED] = cert
        view.advance(TransState.CLOSED)

    def close_trans(self, session: Session, view: TidView) -> bool:
        """Originator side: ask the destination to co-sign closure of a finalized T~."""
        if view.close_sent:
            return False
        finality = view.finality
        if view.state is not TransState.OPENED or finality is None or view.tx is None:
            self.reject(session, view.tid, "E_NOT_FINAL", "close_trans", seq=view.seq)
            return False
        view.close_sent = True
        if self._withholds("close", view.seq):
            return False
        ts_closed = self._timestamp(view.seq)
        request = self._issue(
            session,
            CertPayload(
                sid=session.sid,
                tid=view.tid,
                state=TransState.CLOSED,
                wrapper=view.wrapper,
                tx=view.tx,
                ts_open=view.ts_open,
                ts_closed=ts_closed,
                state_values=finality.values(),
            ),
        )
        view.ts_closed = ts_closed
        view.certs[CertKind.CLOSE_REQUEST] = request
        self.context.network.send(self.name, self.peer, CertMessage(request, ((view.seq, finality),)))
        return True

    # building blocks ---------------------------------------------------------

    def _emit_inited(self, session: Session, view: TidView, evidence: Evidence) -> None:
        values = self._upstream_values(session, view.wrapper, evidence)
        if self._misbehaves("tamper_state", view.seq):
            values = {key: f"{value}0" for key, value in values.items()}
        tx = build_transaction(view.wrapper, sid=session.sid, values=values).signed(self.key)
        cert = self._issue(
            session, CertPayload(sid=session.sid, tid=view.tid, state=TransState.INITED, wrapper=view.wrapper, tx=tx)
        )
        view.tx = tx
        view.certs[CertKind.INITED] = cert
        view.advance(TransState.INITED)
        self._dual_send(session, cert, evidence=self._evidence_for(session, view.wrapper))

    def _expect_signers(self, cert: Certificate, parties: set[Party]) -> None:
        if cert.signers != {party.value for party in parties}:
            raise PartyError("E_WRONG_SIGNER", f"{cert.kind.value} for T{cert.seq} signed by {sorted(cert.signers)}")

    def _expect_own_tx(self, view: TidView, cert: Certificate) -> None:
        tx = cert.payload.tx
        if view.tx is None or tx is None or tx.encode() != view.tx.encode():
            raise PartyError("E_ASSOCIATION", f"{cert.kind.value} for T{view.seq} encloses a different T~")

    def _signer(self, seq: int) -> SigningKey:
        if self._misbehaves("forge", seq):
            return SigningKey.derive(self.key.owner, "forged")
        return self.key

    def _issue(self, session: Session, payload: CertPayload) -> Certificate:
        cert = issue(payload, self._signer(payload.seq))
        session.known.add(cert.key())
        return cert

    def _countersign(self, session: Session, cert: Certificate) -> Certificate:
        signed = cert.countersign(self._signer(cert.seq))
        session.known.add(signed.key())
        return signed

    def _timestamp(self, seq: int) -> int:
        height, delta = self.nsb.height, self.context.timers.delta
        if self._misbehaves("stale_ts", seq):
            return max(0, height - delta - 2)
        if self._misbehaves("future_ts", seq):
            return height + delta + 2
        return height

    def _dual_send(
        self, session: Session, cert: Certificate, *, evidence: tuple[tuple[int, FinalityProof], ...] = ()
    ) -> None:
        """Channel leg to the counterparty, then the NSB leg as a staked action."""
        self.context.network.send(self.name, self.peer, CertMessage(cert, evidence))
        staked = cert
        if not cert.dual_signed and cert.payload.tx is not None and self._misbehaves("equivocate", cert.seq):
            staked = self._equivocated(session, cert)
        try:
            self.nsb.add_action(staked, submitter=self.name)
        except NsbError as exc:
            log_event(
                LOGGER,
                "party_stake_refused",
                level=logging.WARNING,
                sid=session.sid,
                party=self.name,
                seq=cert.seq,
                code=exc.code,
            )

    def _equivocated(self, session: Session, cert: Certificate) -> Certificate:
        tx = cert.payload.tx
        assert tx is not None
        forked = OnChainTransaction.model_validate({**tx.body(), "memo": f"{tx.memo}#"}).signed(self.key)
        return self._issue(session, cert.payload.model_copy(update={"tx": forked}))

    def _schedule_post(self, session: Session, view: TidView) -> None:
        if self._withholds("post", view.seq):
            return
        delay = self._misbehaves("delay", view.seq)
        if delay is not None:
            view.post_at = self.nsb.height + delay.blocks
            log_event(LOGGER, "party_post_delayed", sid=session.sid, party=self.name, seq=view.seq, until=view.post_at)
            return
        self._post(session, view)

    def _post(self, session: Session, view: TidView) -> None:
        assert view.tx is not None
        view.posted = True
        try:
            self.context.chains[view.tx.chain].exec(view.tx)
        except ChainError as exc:
            self.reject(session, view.tid, exc.code, "post", seq=view.seq, detail=exc.message)
            return
        log_event(LOGGER, "party_posted", level=logging.DEBUG, sid=session.sid, party=self.name, seq=view.seq)

    # chain evidence ----------------------------------------------------------

    def _observe_finality(self, session: Session, view: TidView) -> FinalityProof | None:
        """Build Merk^c1 for ``view`` once its T~ is final with an ``ok`` receipt."""
        if view.finality is not None or view.tx is None:
            return view.finality
        chain = self.context.chains.get(view.tx.chain)
        if chain is None:
            return None
        status = chain.query_status(view.tx.tx_id)
        if not status.finalized or status.height is None or status.receipt is None or not status.receipt.ok:
            return None
        block = chain.block(status.height)
        proof = FinalityProof(
            chain=chain.chain_id,
            height=status.height,
            tx_root=block.tx_root,
            state_root=block.state_root,
            tx_proof=chain.merkle_proof(view.tx.tx_id).proof,
            state=tuple(self._state_evidence(chain, session.tdg, view.seq, status.height)),
        )
        self._record_finality(session, view, proof)
        return proof

    def _record_finality(self, session: Session, view: TidView, proof: FinalityProof) -> None:
        view.finality = proof
        view.finality_seen_at = self.nsb.height
        view.proven = proof.values()
        log_event(
            LOGGER,
            "party_finality_seen",
            level=logging.DEBUG,
            sid=session.sid,
            party=self.name,
            seq=view.seq,
            height=proof.height,
        )

    @staticmethod
    def _state_evidence(chain: Chain, tdg: Tdg, seq: int, height: int) -> Iterator[StateEvidence]:
        """StateMT proofs for every var a downstream wrapper consumes from ``seq``."""
        seen: set[tuple[str, str]] = set()
        for wrapper in tdg.wrappers:
            for slot in wrapper.meta.state_proof_slots:
                if slot.seq != seq or (slot.contract, slot.var) in seen:
                    continue
                seen.add((slot.contract, slot.var))
                try:
                    proof = chain.merkle_proof(var_key(slot.contract, slot.var), height)
                except ChainError:
                    continue
                yield StateEvidence(contract=slot.contract, var=slot.var, proof=proof.proof)

    def _adopt_evidence(self, session: Session, view: TidView, proof: FinalityProof | None) -> FinalityProof | None:
        """Accept a counterparty's finality proof once it matches our own read of the block headers."""
        if proof is None or view.tx is None:
            return None
        chain = self.context.chains.get(proof.chain)
        if chain is None or proof.height > chain.height - chain.confirm_depth:
            return None
        block = chain.block(proof.height)
        if (block.tx_root, block.state_root) != (proof.tx_root, proof.state_root) or not proof.verify(view.tx):
            return None
        self._record_finality(session, view, proof)
        return proof

    def _upstream_values(self, session: Session, wrapper: TransactionWrapper, evidence: Evidence) -> dict[str, str]:
        values: dict[str, str] = {}
        for slot in wrapper.meta.state_proof_slots:
            upstream = session.view(slot.seq)
            proof = upstream.finality or self._adopt_evidence(session, upstream, evidence.get(slot.seq))
            proof = proof or self._observe_finality(session, upstream)
            key = state_key(slot.contract, slot.var)
            if proof is None or key not in proof.values():
                raise PartyError(
                    "E_UPSTREAM_UNKNOWN", f"T{wrapper.seq} consumes {key} from T{slot.seq}, not proven yet"
                )
            values[key] = proof.values()[key]
        return values

    def _evidence_for(self, session: Session, wrapper: TransactionWrapper) -> tuple[tuple[int, FinalityProof], ...]:
        evidence: dict[int, FinalityProof] = {}
        for slot in wrapper.meta.state_proof_slots:
            proof = session.view(slot.seq).finality
            if proof is not None:
                evidence[slot.seq] = proof
        return tuple(sorted(evidence.items()))

    def _precondition_met(self, session: Session, seq: int) -> bool:
        upstream = session.view(seq)
        return upstream.state >= TransState.CLOSED or self._observe_finality(session, upstream) is not None

    def _require_preconditions(self, session: Session, view: TidView) -> None:
        pending = [pred for pred in session.tdg.predecessors(view.seq) if not self._precondition_met(session, pred)]
        if pending:
            raise PartyError("E_PRECONDITION", f"T{view.seq} waits for T{pending} to finalize")

    # session setup -----------------------------------------------------------

    def on_contract_created(self, message: ContractCreated) -> None:
        session = self.sessions.get(message.sid)
        if session is None:
            session = Session.open(message.sid, self.role, message.tdg)
            self.sessions[message.sid] = session
        if message.tdg.digest() != session.tdg.digest() or message.cid != contract_id(message.sid, session.tdg):
            self.reject(session, "", "E_CONTRACT_MISMATCH", "contract_created", detail=message.cid[:16])
            return
        session.cid = message.cid
        session.created_at = message.created_at
        accepted = self._misbehaves("reject_contract") is None
        if accepted:
            self.stake(session)
        self._acknowledge(session, accepted)

    def _acknowledge(self, session: Session, accepted: bool) -> None:
        assert session.cid is not None
        self.context.network.send(self.name, self.peer, ContractAck(session.sid, session.cid, accepted))

    def on_contract_ack(self, message: ContractAck) -> None:
        session = self.sessions.get(message.sid)
        if session is None or session.cid != message.cid:
            return
        session.counterparty_ack = message.accepted
        log_event(
            LOGGER,
            "session_ack",
            level=logging.INFO if message.accepted else logging.WARNING,
            sid=session.sid,
            party=self.name,
            accepted=message.accepted,
        )

    def on_activated(self, message: SessionActivated) -> None:
        session = self.sessions.get(message.sid)
        if session is None or session.cid != message.cid:
            return
        session.activated_at = message.activated_at
        session.timer = message.timer
        log_event(
            LOGGER, "session_active", sid=session.sid, party=self.name, height=message.activated_at, timer=message.timer
        )

    def stake(self, session: Session) -> int:
        """Deposit this party's stake requirement with the ISC escrow; returns the amount sent."""
        assert session.cid is not None
        amount = stake_requirements(session.tdg)[self.role]
        if self._misbehaves("understake") is not None:
            amount = max(0, amount - 1)
        if amount == 0:
            return 0
        host = self.context.host
        source = self.context.ves_config.refund_accounts[self.role]
        tx = OnChainTransaction(
            chain=host.chain_id,
            from_=source,
            to=self.context.escrow,
            value=amount,
            unit=session.tdg.session.isc_unit,
            call=ContractCall(method=STAKE_METHOD, args=(session.cid,)),
            nonce=host.next_nonce(source),
            signer=self.name,
            memo=f"stake/{session.sid}",
        ).signed(self.key)
        try:
            host.exec(tx)
        except ChainError as exc:
            self.reject(session, "", exc.code, "stake", detail=exc.message)
            return 0
        session.staked = amount
        log_event(LOGGER, "party_staked", sid=session.sid, party=self.name, amount=amount)
        return amount


__all__ = ["ISC_ENDPOINT", "PartyContext", "ProtocolParty"]
