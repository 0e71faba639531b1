"""The two session roles: the driving VES and the lightweight dApp client."""
from __future__ import annotations

import logging
from functools import partial
from typing import ClassVar

from src.core.models import CertKind, Party, TransState
from src.core.utils import log_event
from src.domain.attestation import CertPayload
from src.domain.compiler import Tdg

from .messages import ContractRequest
from .party import ISC_ENDPOINT
from .session import Session, TidView
from .watchers import WatchingParty

LOGGER = logging.getLogger(__name__)


class VesParty(WatchingParty):
    """Prot_VES: requests the contract, watches every chain and drives eligible transactions."""

    role: ClassVar[Party] = Party.VES

    def watches(self, view: TidView) -> bool:
        return True

    def start_session(self, sid: str, tdg: Tdg) -> Session:
        if sid in self.sessions:
            return self.sessions[sid]
        session = Session.open(sid, self.role, tdg)
        self.sessions[sid] = session
        if self.nsb.config.watching:
            self.nsb.watch_session(sid)
        self.context.network.send(
            self.name, ISC_ENDPOINT, ContractRequest(sid, tdg, tuple(party.value for party in Party))
        )
        log_event(LOGGER, "session_requested", sid=sid, wrappers=len(tdg))
        return session

    def drive(self, session: Session) -> None:
        for seq in session.order():
            view = session.view(seq)
            if view.dispatched or view.state is not TransState.UNKNOWN:
                continue
            if not all(self._precondition_met(session, pred) for pred in session.tdg.predecessors(seq)):
                continue
            view.dispatched = True
            if self._withholds("drive", seq):
                continue
            if view.wrapper.originator is Party.CLIENT:
                self._attempt(session, view, "req_trans_init", partial(self.req_trans_init, session, view))
            else:
                self._attempt(session, view, "s_inited_trans", partial(self.s_inited_trans, session, view))

    def req_trans_init(self, session: Session, view: TidView) -> None:
        """Southbound start: Cert^i asks the client to compute and sign its T~."""
        self._require_preconditions(session, view)
        cert = self._issue(
            session, CertPayload(sid=session.sid, tid=view.tid, state=TransState.INIT, wrapper=view.wrapper)
        )
        view.certs[CertKind.INIT] = cert
        view.advance(TransState.INIT)
        self._dual_send(session, cert, evidence=self._evidence_for(session, view.wrapper))

    def s_inited_trans(self, session: Session, view: TidView) -> None:
        """Northbound start: the VES computes T~ itself and announces Cert^id."""
        self._require_preconditions(session, view)
        self._emit_inited(session, view, {})

    r_inited_trans = WatchingParty.inited_trans


class ClientParty(WatchingParty):
    """Prot_CLI: reacts to certificates and watches only the chains of its own transactions."""

    role: ClassVar[Party] = Party.CLIENT


__all__ = ["ClientParty", "VesParty"]
