"""Prometheus metrics adapter and exporter controls."""
from __future__ import annotations

import atexit
from threading import Lock, Thread
from typing import Optional, Tuple, Union, cast
from wsgiref.simple_server import WSGIServer

from prometheus_client import Counter, Gauge, start_http_server

from src.domain.ports import ProtocolMetrics

_NSB_SUBMISSIONS = Counter(
    "uip_nsb_submissions_total",
    "NSB transactions submitted, by kind (action or status).",
    labelnames=("kind",),
)
_ISC_CLAIMS = Counter(
    "uip_isc_claims_total",
    "Insurance claims processed by the ISC, by outcome.",
    labelnames=("outcome",),
)
_BUS_MESSAGES = Counter(
    "uip_messages_total",
    "Simulated network bus events, by event kind.",
    labelnames=("event",),
)
_SETTLEMENTS = Counter(
    "uip_settlements_total",
    "ISC settlements, by outcome (success, failure, inactive).",
    labelnames=("outcome",),
)
_CHAIN_BLOCKS = Counter(
    "uip_chain_blocks_total",
    "Blocks appended by simulated chains.",
    labelnames=("chain",),
)
_EXPORTER_HEALTH = Gauge(
    "uip_metrics_http_started",
    "Whether the Prometheus HTTP exporter has been started (1) or stopped (0).",
)

_ExporterReturn = Union[WSGIServer, Tuple[WSGIServer, Thread]]

_EXPORTER_LOCK = Lock()
_EXPORTER_SERVER: Optional[WSGIServer] = None
_EXPORTER_THREAD: Optional[Thread] = None


def start_metrics_http_server(port: int, addr: str = "127.0.0.1") -> int:
    """Start the exporter if not already running and return the bound port."""

    global _EXPORTER_SERVER, _EXPORTER_THREAD
    with _EXPORTER_LOCK:
        if _EXPORTER_SERVER is not None:
            return int(_EXPORTER_SERVER.server_port)
        raw_server = cast(_ExporterReturn, start_http_server(port, addr=addr))
        thread: Thread | None = None
        if isinstance(raw_server, tuple):  # pragma: no cover - depends on client version
            httpd, thread = raw_server
        else:  # pragma: no cover - depends on client version
            httpd = raw_server
        _EXPORTER_SERVER = httpd
        _EXPORTER_THREAD = thread
        _EXPORTER_HEALTH.set(1)
        return int(httpd.server_port)


def get_metrics_http_port() -> int | None:
    with _EXPORTER_LOCK:
        return None if _EXPORTER_SERVER is None else int(_EXPORTER_SERVER.server_port)


def stop_metrics_http_server() -> None:
    """Stop the exporter if it is running."""

    global _EXPORTER_SERVER, _EXPORTER_THREAD
    with _EXPORTER_LOCK:
        if _EXPORTER_SERVER is None:
            return
        try:
            _EXPORTER_SERVER.shutdown()
            _EXPORTER_SERVER.server_close()
            if _EXPORTER_THREAD is not None:
                _EXPORTER_THREAD.join(timeout=1)
        finally:
            _EXPORTER_SERVER = None
            _EXPORTER_THREAD = None
            _EXPORTER_HEALTH.set(0)


atexit.register(stop_metrics_http_server)


class PrometheusProtocolMetrics(ProtocolMetrics):
    """Concrete implementation of :class:`ProtocolMetrics`."""

    def observe_nsb_submission(self, *, kind: str) -> None:
        _NSB_SUBMISSIONS.labels(kind=kind).inc()

    def observe_claim(self, *, outcome: str) -> None:
        _ISC_CLAIMS.labels(outcome=outcome).inc()

    def observe_message(self, *, event: str) -> None:
        _BUS_MESSAGES.labels(event=event).inc()

    def observe_settlement(self, *, outcome: str) -> None:
        _SETTLEMENTS.labels(outcome=outcome).inc()

    def observe_chain_block(self, *, chain: str) -> None:
        _CHAIN_BLOCKS.labels(chain=chain).inc()
