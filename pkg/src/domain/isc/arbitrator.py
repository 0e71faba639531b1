"""The insurance smart contract, hosted behind an escrow address on one chain."""
from __future__ import annotations

import logging
from typing import Mapping

from src.core.errors import IscError, NsbError
from src.core.models import CertKind, Party, TransState
from src.core.utils import KeyDirectory, SigningKey, hex_digest, log_event
from src.domain.attestation import Attestation, Certificate, MerkleAttestation, associated, tid_of
from src.domain.chain import Chain, OnChainTransaction
from src.domain.compiler import Tdg, stake_requirements
from src.domain.nsb import Nsb
from src.domain.ports import NullMetrics, ProtocolMetrics

from .config import TimerConfig
from .rules import deadline_verify, dirty_trans, fresh, responsible_party
from .state import IscContract, Payout, Reversion, SettlementRecord, TxRecord

LOGGER = logging.getLogger(__name__)

STAKE_METHOD = "StakeFund"


def contract_id(sid: str, tdg: Tdg) -> str:
    """``cid = H(session nonce || contract)``."""
    return hex_digest({"nonce": sid, "contract": tdg.digest()})


class _Verdict:
    __slots__ = ("state", "ts_open", "ts_closed", "st_proof", "tx")

    def __init__(
        self,
        state: TransState,
        *,
        ts_open: int | None = None,
        ts_closed: int | None = None,
        st_proof: dict[str, str] | None = None,
        tx: OnChainTransaction | None = None,
    ) -> None:
        self.state = state
        self.ts_open = ts_open
        self.ts_closed = ts_closed
        self.st_proof = st_proof
        self.tx = tx


class InsuranceArbitrator:
    """Prot_ISC: contract creation, staking, claims and timeout settlement.

    Handlers are atomic: an aborted claim leaves the contract untouched.
    """

    def __init__(
        self,
        *,
        nsb: Nsb,
        host: Chain,
        escrow: str,
        key: SigningKey,
        keys: KeyDirectory,
        refund_accounts: Mapping[Party, str],
        timers: TimerConfig,
        metrics: ProtocolMetrics | None = None,
    ) -> None:
        if host.owners.get(escrow) != key.owner:
            raise IscError("E_ESCROW_OWNER", f"escrow {escrow} on {host.chain_id} is not signed by {key.owner}")
        self.nsb = nsb
        self.host = host
        self.escrow = escrow
        self.key = key
        self.keys = keys
        self.refund_accounts = dict(refund_accounts)
        self.timers = timers
        self.metrics = metrics or NullMetrics()
        self.contracts: dict[str, IscContract] = {}
        self.settlements: dict[str, SettlementRecord] = {}
        self.payout_txs: list[str] = []
        self._scanned = host.height

    # contract lifecycle ------------------------------------------------------

    def create_contract(self, tdg: Tdg, *, sid: str) -> tuple[str, IscContract]:
        cid = contract_id(sid, tdg)
        if cid in self.contracts or cid in self.settlements:
            raise IscError("E_DUPLICATE_CONTRACT", f"session {sid} already has contract {cid[:16]}")
        st: dict[str, TxRecord] = {}
        a_revs: dict[str, Reversion] = {}
        for wrapper in tdg.wrappers:
            tid = tid_of(wrapper)
            st[tid] = TxRecord(tid=tid, wrapper=wrapper)
            a_revs[tid] = Reversion(amt=0, dst=wrapper.meta.dst)
        contract = IscContract(
            cid=cid,
            sid=sid,
            tdg=tdg,
            created_at=self.nsb.height,
            requirements=stake_requirements(tdg),
            st=st,
            a_revs=a_revs,
        )
        self.contracts[cid] = contract
        log_event(LOGGER, "isc_contract_created", sid=sid, cid=cid[:16], wrappers=len(tdg), height=self.nsb.height)
        return cid, contract

    def contract(self, cid: str) -> IscContract:
        try:
            return self.contracts[cid]
        except KeyError as exc:
            raise IscError("E_UNKNOWN_CONTRACT", f"no live contract {cid[:16]}") from exc

    def stake_fund(self, cid: str, sender: Party, value: int) -> int:
        contract = self.contract(cid)
        contract.f_stake[sender] += value
        log_event(
            LOGGER, "isc_stake", sid=contract.sid, party=sender.value, value=value, total=contract.f_stake[sender]
        )
        return contract.f_stake[sender]

    def observe_stakes(self) -> list[tuple[str, Party, int]]:
        """Credit finalized ``StakeFund`` deposits to the escrow; refund deposits for unknown contracts."""
        credited: list[tuple[str, Party, int]] = []
        final = self.host.height - self.host.confirm_depth
        for height in range(self._scanned + 1, final + 1):
            block = self.host.block(height)
            for tx, receipt in zip(self.host.transactions(height), block.receipts):
                if tx.to != self.escrow or tx.call is None or tx.call.method != STAKE_METHOD or not receipt.ok:
                    continue
                cid = tx.call.args[0] if tx.call.args else ""
                owner = self.host.owners.get(tx.from_, "")
                contract = self.contracts.get(cid)
                accepted = (
                    contract is not None
                    and owner in {party.value for party in Party}
                    and tx.unit == contract.tdg.session.isc_unit
                )
                if not accepted:
                    if tx.value:
                        self._transfer(tx.from_, tx.value, tx.unit, memo=f"refund/{tx.tx_id[:16]}")
                    continue
                self.stake_fund(cid, Party(owner), tx.value)
                credited.append((cid, Party(owner), tx.value))
        self._scanned = max(self._scanned, final)
        return credited

    def activate_ready(self) -> list[IscContract]:
        """Activate every contract whose stakes now meet the stored requirements."""
        activated: list[IscContract] = []
        for contract in self.contracts.values():
            if contract.active or not contract.stake_satisfied():
                continue
            contract.activated_at = self.nsb.height
            contract.timer = contract.activated_at + self.timers.settle_after_blocks
            activated.append(contract)
            log_event(LOGGER, "isc_activated", sid=contract.sid, height=contract.activated_at, timer=contract.timer)
        return activated

    # claims ------------------------------------------------------------------

    def insurance_claim(self, cid: str, attestation: Attestation) -> TransState:
        contract = self.contract(cid)
        try:
            if not contract.active:
                raise IscError("E_NOT_ACTIVE", f"contract {cid[:16]} is not active")
            record = contract.st.get(attestation.tid)
            if record is None:
                raise IscError("E_UNKNOWN_TID", f"{attestation.tid[:16]} is not part of contract {cid[:16]}")
            claimed = attestation.kind.state
            if record.state > claimed:
                raise IscError(
                    "E_STALE_ATTESTATION",
                    f"T{record.seq} is already {record.state.value}; {claimed.value} is lower-ranked",
                )
            if record.state is claimed:
                return record.state
            verdict = self._evaluate(contract, record, attestation)
        except IscError as exc:
            self.metrics.observe_claim(outcome="rejected")
            log_event(LOGGER, "isc_claim_rejected", sid=contract.sid, tid=attestation.tid[:16], code=exc.code)
            raise
        record.state = verdict.state
        if verdict.ts_open is not None:
            record.ts_open = verdict.ts_open
        if verdict.ts_closed is not None:
            record.ts_closed = verdict.ts_closed
        if verdict.st_proof is not None:
            record.st_proof = verdict.st_proof
        if verdict.tx is not None:
            record.tx = verdict.tx
        self.metrics.observe_claim(outcome="accepted")
        log_event(
            LOGGER,
            "isc_claim_accepted",
            sid=contract.sid,
            seq=record.seq,
            kind=attestation.kind.value,
            state=record.state.value,
        )
        return record.state

    def _evaluate(self, contract: IscContract, record: TxRecord, attestation: Attestation) -> _Verdict:
        cert = attestation.cert if isinstance(attestation, MerkleAttestation) else attestation
        self._check_certificate(contract, record, cert)
        if isinstance(attestation, Certificate):
            return self._evaluate_certificate(cert)
        if attestation.closing:
            return self._evaluate_closing(contract, record, attestation)
        return self._evaluate_staked(contract, record, attestation)

    def _check_certificate(self, contract: IscContract, record: TxRecord, cert: Certificate) -> None:
        if cert.payload.sid != contract.sid:
            raise IscError("E_SESSION_MISMATCH", f"certificate for session {cert.payload.sid}")
        if cert.payload.wrapper != record.wrapper:
            raise IscError("E_ASSOCIATION", f"certificate wrapper differs from T{record.seq}")
        if not cert.verify(self.keys) or not cert.signers <= {party.value for party in Party}:
            raise IscError("E_BAD_SIGNATURE", f"certificate for T{record.seq} does not verify")

    def _evaluate_certificate(self, cert: Certificate) -> _Verdict:
        if not cert.dual_signed:
            raise IscError("E_UNACCEPTABLE", "only dual-signed certificates are accepted without a proof")
        payload = cert.payload
        if cert.kind is CertKind.OPENED:
            return _Verdict(TransState.OPENED, ts_open=payload.ts_open, tx=payload.tx)
        if cert.kind is CertKind.CLOSED:
            return _Verdict(
                TransState.CLOSED, ts_closed=payload.ts_closed, st_proof=dict(payload.state_values), tx=payload.tx
            )
        raise IscError("E_UNACCEPTABLE", f"dual-signed {cert.kind.value} certificates prove no progress")

    def _evaluate_closing(self, contract: IscContract, record: TxRecord, attestation: MerkleAttestation) -> _Verdict:
        finality, status = attestation.finality, attestation.status
        assert finality is not None and status is not None
        tx = attestation.cert.payload.tx
        if tx is None or not finality.verify(tx):
            raise IscError("E_BAD_PROOF", f"finality proof for T{record.seq} does not verify")
        if not status.covers(finality) or not status.verify(self._nsb_block_roots(status.nsb_height)[1]):
            raise IscError("E_BAD_PROOF", f"status proof for T{record.seq} does not verify")
        self._check_association(contract, record, tx)
        return _Verdict(TransState.CLOSED, ts_closed=status.nsb_height, st_proof=finality.values(), tx=tx)

    def _evaluate_staked(self, contract: IscContract, record: TxRecord, attestation: MerkleAttestation) -> _Verdict:
        cert, action = attestation.cert, attestation.action
        if action is None:
            raise IscError("E_BAD_PROOF", f"no proof of action for T{record.seq}")
        if not action.verify(cert, self._nsb_block_roots(action.height)[0]):
            raise IscError("E_BAD_PROOF", f"proof of action for T{record.seq} does not verify")
        kind, wrapper, payload = cert.kind, record.wrapper, cert.payload
        expected = {
            CertKind.INIT: {Party.VES},
            CertKind.INITED: {wrapper.originator},
            CertKind.OPEN: {wrapper.destination},
            CertKind.OPENED: {Party.VES, Party.CLIENT},
            CertKind.CLOSED: {Party.VES, Party.CLIENT},
        }.get(kind)
        if expected is None:
            raise IscError("E_UNACCEPTABLE", f"{kind.value} certificates are not stakeable")
        if cert.signers != {party.value for party in expected}:
            raise IscError("E_WRONG_SIGNER", f"{kind.value} for T{record.seq} signed by {sorted(cert.signers)}")
        if payload.tx is not None:
            self._check_association(contract, record, payload.tx)
        if kind in (CertKind.OPEN, CertKind.OPENED) and not fresh(payload.ts_open, action.height, self.timers.delta):
            raise IscError("E_STALE_TIMESTAMP", f"ts_open {payload.ts_open} is not fresh at NSB {action.height}")
        if kind is CertKind.CLOSED and not fresh(payload.ts_closed, action.height, self.timers.delta):
            raise IscError("E_STALE_TIMESTAMP", f"ts_closed {payload.ts_closed} is not fresh at NSB {action.height}")
        if kind is CertKind.CLOSED:
            return _Verdict(
                TransState.CLOSED, ts_closed=payload.ts_closed, st_proof=dict(payload.state_values), tx=payload.tx
            )
        return _Verdict(kind.state, ts_open=payload.ts_open if kind.state >= TransState.OPEN else None, tx=payload.tx)

    def _check_association(self, contract: IscContract, record: TxRecord, tx: OnChainTransaction) -> None:
        values: dict[str, str] = {}
        for slot in record.wrapper.meta.state_proof_slots:
            upstream = contract.by_seq(slot.seq)
            if upstream.state < TransState.CLOSED:
                raise IscError("E_ASSOCIATION", f"T{record.seq} consumes state of T{slot.seq}, which is not closed")
            values.update(upstream.st_proof)
        if not associated(record.wrapper, tx, sid=contract.sid, values=values):
            raise IscError("E_ASSOCIATION", f"T~ is not the transaction T{record.seq} yields")

    def _nsb_block_roots(self, height: int) -> tuple[bytes, bytes]:
        try:
            block = self.nsb.block(height)
        except NsbError as exc:
            raise IscError("E_BAD_PROOF", f"NSB block {height} does not exist") from exc
        return block.action_root, block.status_root

    # settlement --------------------------------------------------------------

    def due(self) -> list[SettlementRecord]:
        """Settle expired contracts and erase stale inactive ones."""
        records: list[SettlementRecord] = []
        height = self.nsb.height
        for cid, contract in list(self.contracts.items()):
            if contract.timer is not None and height >= contract.timer:
                records.append(self.settle_contract(cid))
            elif not contract.active and height >= contract.created_at + self.timers.setup_timeout_blocks:
                records.append(self.expire_setup(cid))
        return records

    def settle_contract(self, cid: str) -> SettlementRecord:
        if cid in self.settlements:
            raise IscError("E_ALREADY_SETTLED", f"contract {cid[:16]} was already settled")
        contract = self.contract(cid)
        if contract.timer is None:
            raise IscError("E_NOT_ACTIVE", f"contract {cid[:16]} never activated")
        if self.nsb.height < contract.timer:
            raise IscError("E_NOT_EXPIRED", f"timer expires at NSB {contract.timer}, now {self.nsb.height}")
        assert contract.activated_at is not None
        for record in sorted(contract.st.values(), key=lambda item: item.seq):
            if record.state is not TransState.CLOSED:
                continue
            contract.a_revs[record.tid].amt = record.wrapper.meta.amt
            try:
                on_time = deadline_verify(record, contract.st, contract.tdg, session_start=contract.activated_at)
            except IscError:
                on_time = False
            if on_time:
                record.state = TransState.CORRECT
        dirty = dirty_trans(contract.tdg, contract.st)
        contract.resp = {tid: responsible_party(contract.st[tid].state, contract.st[tid].wrapper) for tid in dirty}
        reversions = {
            contract.st[tid].seq: revert for tid, revert in contract.a_revs.items() if dirty and revert.amt > 0
        }
        net = dict(contract.f_stake)
        for seq, revert in reversions.items():
            wrapper = contract.tdg.wrapper(seq)
            net[wrapper.originator] += revert.amt
            net[wrapper.destination] -= revert.amt
        shortfall = {party: max(0, -amount) for party, amount in net.items()}
        for party, missing in shortfall.items():
            if missing:
                net[party] = 0
                net[party.counterpart] -= missing
        outcome = "failure" if dirty else "success"
        record = SettlementRecord(
            cid=cid,
            sid=contract.sid,
            outcome=outcome,
            height=self.nsb.height,
            states={item.seq: item.state for item in contract.st.values()},
            dirty=tuple(sorted(contract.st[tid].seq for tid in dirty)),
            resp={contract.st[tid].seq: party for tid, party in contract.resp.items()},
            reversions=reversions,
            shortfall=shortfall,
            stakes=dict(contract.f_stake),
            payouts=self._pay(contract, net),
        )
        self._erase(cid, record)
        self.metrics.observe_settlement(outcome=outcome)
        log_event(
            LOGGER,
            "isc_settled",
            sid=contract.sid,
            outcome=outcome,
            dirty=list(record.dirty),
            resp={str(seq): party.value for seq, party in record.resp.items()},
        )
        return record

    def expire_setup(self, cid: str) -> SettlementRecord:
        contract = self.contract(cid)
        if contract.active:
            raise IscError("E_ALREADY_ACTIVE", f"contract {cid[:16]} is active")
        record = SettlementRecord(
            cid=cid,
            sid=contract.sid,
            outcome="aborted",
            height=self.nsb.height,
            states={item.seq: item.state for item in contract.st.values()},
            dirty=(),
            resp={},
            reversions={},
            shortfall={party: 0 for party in Party},
            stakes=dict(contract.f_stake),
            payouts=self._pay(contract, dict(contract.f_stake)),
        )
        self._erase(cid, record)
        self.metrics.observe_settlement(outcome="aborted")
        log_event(LOGGER, "isc_setup_expired", sid=contract.sid, stakes={p.value: v for p, v in record.stakes.items()})
        return record

    def _pay(self, contract: IscContract, amounts: Mapping[Party, int]) -> tuple[Payout, ...]:
        unit = contract.tdg.session.isc_unit
        payouts: list[Payout] = []
        for party in Party:
            amount = amounts.get(party, 0)
            if amount <= 0:
                continue
            address = self.refund_accounts[party]
            self._transfer(address, amount, unit, memo=f"{contract.sid}/settle")
            payouts.append(Payout(party=party, address=address, amount=amount))
        return tuple(payouts)

    def _transfer(self, address: str, amount: int, unit: str, *, memo: str) -> None:
        tx = OnChainTransaction(
            chain=self.host.chain_id,
            from_=self.escrow,
            to=address,
            value=amount,
            unit=unit,
            nonce=self.host.next_nonce(self.escrow),
            signer=self.key.owner,
            memo=memo,
        ).signed(self.key)
        self.payout_txs.append(self.host.exec(tx))

    def _erase(self, cid: str, record: SettlementRecord) -> None:
        del self.contracts[cid]
        self.settlements[cid] = record

    def payouts_final(self) -> bool:
        return all(self.host.query_status(tx_id).finalized for tx_id in self.payout_txs)


__all__ = ["STAKE_METHOD", "InsuranceArbitrator", "contract_id"]
