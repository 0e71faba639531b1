"""Watching services: chain finality, the NSB action/status trees and ISC invocation."""
from __future__ import annotations

import logging

from src.core.errors import NsbError
from src.core.models import STAKEABLE_KINDS, CertKind, TransState
from src.core.utils import log_event
from src.domain.attestation import CertPayload, FinalityProof, MerkleAttestation
from src.domain.nsb import StatusClaim

from .messages import Claim
from .party import ISC_ENDPOINT, ProtocolParty
from .session import Session, TidView

LOGGER = logging.getLogger(__name__)


class WatchingParty(ProtocolParty):
    """Adds the event-driven daemons the scheduler steps every tick and every NSB block."""

    def watch_chain(self) -> int:
        """Detect newly finalized T~ and request closure of our own opened transactions."""
        if self.crashed:
            return 0
        observed = 0
        for session in self.sessions.values():
            for seq in sorted(session.views):
                view = session.views[seq]
                if view.tx is None or not self.watches(view):
                    continue
                if view.finality is None and self._observe_finality(session, view) is not None:
                    observed += 1
                if (
                    view.finality is not None
                    and view.wrapper.originator is self.role
                    and view.state is TransState.OPENED
                    and not view.close_sent
                ):
                    self.close_trans(session, view)
        return observed

    def watch_nsb(self) -> None:
        """Process every NSB block appended since the last call."""
        if self.crashed:
            return
        heights = range(self._scanned + 1, self.nsb.height + 1)
        self._scanned = self.nsb.height
        for session in list(self.sessions.values()):
            for height in heights:
                self._ingest(session, height)
            self._collect_proofs(session)
            self._fallback_close(session)
            self._post_delayed(session)
            if session.active:
                self.drive(session)
                self.invoke_isc(session)

    def drive(self, session: Session) -> None:
        """Dispatch newly eligible transactions; only the VES drives a session."""

    # NSB daemons -------------------------------------------------------------

    def _ingest(self, session: Session, height: int) -> None:
        """Certificates staked for this session that never arrived over the channel."""
        for cert in self.nsb.actions(height):
            if self.crashed:
                return
            if cert.payload.sid == session.sid and cert.key() not in session.known:
                self.on_certificate(session, cert, via="nsb")

    def _collect_proofs(self, session: Session) -> None:
        for view in session.views.values():
            for kind, cert in view.certs.items():
                if kind not in STAKEABLE_KINDS or kind in view.merks:
                    continue
                if self.nsb.committed_height(cert.key()) is None:
                    continue
                view.merks[kind] = MerkleAttestation(cert=cert, action=self.nsb.merkle_proof(cert.key()))

    def _fallback_close(self, session: Session) -> None:
        """Assemble Merk^c from chain finality plus a committed status claim when Cert^c is missing."""
        patience = self.context.timers.close_patience_blocks
        for seq in sorted(session.views):
            view = session.views[seq]
            if not TransState.OPEN <= view.state < TransState.CLOSED or not self.watches(view):
                continue
            finality, seen = view.finality, view.finality_seen_at
            if finality is None or seen is None:
                continue
            wait = patience if view.wrapper.originator is self.role else 2 * patience
            if self.nsb.height < seen + wait:
                continue
            committed = self.nsb.status_committed_at(finality.chain, finality.height)
            if committed is None:
                self._claim_status(session, view, finality)
                continue
            self._assemble_closing(session, view, finality, committed)

    def _claim_status(self, session: Session, view: TidView, finality: FinalityProof) -> None:
        if view.status_claimed or self.nsb.config.watching:
            return
        assert view.tx is not None
        view.status_claimed = True
        outcome = self.nsb.closure_claim(
            StatusClaim(
                tx_id=view.tx.tx_id,
                chain=finality.chain,
                height=finality.height,
                tx_root=finality.tx_root.hex(),
                state_root=finality.state_root.hex(),
                tid=view.tid,
            ),
            submitter=self.name,
        )
        log_event(LOGGER, "party_status_claim", sid=session.sid, party=self.name, seq=view.seq, outcome=outcome)

    def _assemble_closing(self, session: Session, view: TidView, finality: FinalityProof, committed: int) -> None:
        assert view.tx is not None
        try:
            status = self.nsb.status_proof(finality.chain, finality.height, at=committed)
        except NsbError:
            return
        request = view.certs.get(CertKind.CLOSE_REQUEST) if view.wrapper.originator is self.role else None
        if request is None:
            request = self._issue(
                session,
                CertPayload(
                    sid=session.sid,
                    tid=view.tid,
                    state=TransState.CLOSED,
                    wrapper=view.wrapper,
                    tx=view.tx,
                    ts_open=view.ts_open,
                    ts_closed=self._timestamp(view.seq),
                    state_values=finality.values(),
                ),
            )
        view.merks[CertKind.CLOSED] = MerkleAttestation(cert=request, finality=finality, status=status)
        view.ts_closed = status.nsb_height
        view.advance(TransState.CLOSED)
        log_event(
            LOGGER, "party_closed_by_proof", sid=session.sid, party=self.name, seq=view.seq, nsb=status.nsb_height
        )

    def _post_delayed(self, session: Session) -> None:
        for seq in sorted(session.views):
            view = session.views[seq]
            if view.post_at is not None and not view.posted and self.nsb.height >= view.post_at:
                self._post(session, view)

    # ISC ---------------------------------------------------------------------

    def invoke_isc(self, session: Session) -> int:
        """Submit one max-state attestation per tid, once, shortly before the ISC timer."""
        if session.claimed or session.timer is None or session.cid is None:
            return 0
        if self.nsb.height < session.timer - self.context.timers.claim_lead_blocks:
            return 0
        session.claimed = True
        if self._withholds("claim", None):
            return 0
        sent = 0
        for seq in session.order():
            best = session.view(seq).best_attestation()
            if best is None:
                continue
            self.context.network.send(self.name, ISC_ENDPOINT, Claim(session.cid, best))
            sent += 1
        log_event(LOGGER, "party_claims_sent", sid=session.sid, party=self.name, claims=sent, height=self.nsb.height)
        return sent


__all__ = ["WatchingParty"]
