from __future__ import annotations

import pytest
from pydantic import ValidationError

from src.core.errors import NetsimError
from src.core.models import CertKind, Party
from src.domain.netsim import AdversaryScript, Corruption, CrashRule, LinkRule, Misbehaviour, Network

from ..conftest import StubMetrics
from .conftest import Ping, lossy, wire


def test_default_delivery_is_fifo_after_one_tick(network: Network) -> None:
    inboxes = wire(network, "ves", "client")
    for body in ("a", "b", "c"):
        network.send("ves", "client", Ping(body))
    outcome = network.run_until_quiescent(max_steps=10)
    assert not outcome.capped
    assert inboxes["client"].received == [(1, "ves", "a"), (1, "ves", "b"), (1, "ves", "c")]


def test_trace_line_format(network: Network) -> None:
    wire(network, "ves", "client")
    network.send("ves", "client", Ping("a"))
    network.run_until_quiescent(max_steps=5)
    send, deliver = network.trace_lines()
    assert send.startswith("t=0 send ves client ")
    assert deliver.startswith("t=1 deliver ves client ")
    assert send.split()[-1] == deliver.split()[-1]
    assert len(send.split()[-1]) == 16


def test_drop_all_on_one_link_only(stub_metrics: StubMetrics) -> None:
    script = AdversaryScript(
        links=(
            LinkRule(source="ves", target="client", drop_probability=1.0),
            LinkRule(source="client", target="ves", drop_probability=1.0),
        )
    )
    network = Network(script, seed=3, metrics=stub_metrics)
    inboxes = wire(network, "ves", "client", "isc")
    for index in range(5):
        network.send("ves", "client", Ping(f"c{index}"))
        network.send("client", "ves", Ping(f"v{index}"))
        network.send("ves", "isc", Ping(f"i{index}"))
    network.run_until_quiescent(max_steps=100)
    assert inboxes["client"].received == []
    assert inboxes["ves"].received == []
    assert [body for _, _, body in inboxes["isc"].received] == [f"i{index}" for index in range(5)]
    assert stub_metrics.messages == {"send": 15, "drop": 10, "deliver": 5}


def test_deterministic_drop_indices(network: Network) -> None:
    script = AdversaryScript(links=(LinkRule(source="ves", target="client", drop_indices=frozenset({0, 2})),))
    network = Network(script)
    inboxes = wire(network, "ves", "client")
    for body in "abcd":
        network.send("ves", "client", Ping(body))
    network.run_until_quiescent(max_steps=10)
    assert [body for _, _, body in inboxes["client"].received] == ["b", "d"]


def test_same_seed_same_trace() -> None:
    traces = []
    for _ in range(2):
        network = lossy(42)
        wire(network, "ves", "client")
        for index in range(30):
            network.send("ves", "client", Ping(str(index)))
        network.run_until_quiescent(max_steps=100)
        traces.append(network.trace_lines())
    assert traces[0] == traces[1]
    other = lossy(43)
    wire(other, "ves", "client")
    for index in range(30):
        other.send("ves", "client", Ping(str(index)))
    other.run_until_quiescent(max_steps=100)
    assert other.trace_lines() != traces[0]


def test_rules_on_one_link_do_not_shift_another() -> None:
    def deliveries(script: AdversaryScript) -> list[tuple[int, str, str]]:
        network = Network(script, seed=7)
        inboxes = wire(network, "ves", "client", "isc")
        for index in range(20):
            network.send("ves", "client", Ping(str(index)))
            network.send("client", "isc", Ping(str(index)))
        network.run_until_quiescent(max_steps=200)
        return inboxes["isc"].received

    jittered = LinkRule(source="client", target="isc", delay=2, jitter=4, drop_probability=0.2)
    quiet = AdversaryScript(links=(jittered,))
    noisy = AdversaryScript(links=(LinkRule(source="ves", target="client", drop_probability=0.9), jittered))
    assert deliveries(quiet) == deliveries(noisy)


def test_timers_fire_in_order(network: Network) -> None:
    fired: list[tuple[int, str]] = []
    network.schedule(2, "b", lambda: fired.append((network.now, "b")))
    network.schedule(1, "a", lambda: fired.append((network.now, "a")))
    network.schedule(2, "c", lambda: fired.append((network.now, "c")))
    network.run_until_quiescent(max_steps=10)
    assert fired == [(1, "a"), (2, "b"), (2, "c")]


def test_cap_is_reported_not_raised(network: Network) -> None:
    def rearm() -> None:
        network.schedule(1, "tick", rearm)

    network.schedule(0, "tick", rearm)
    outcome = network.run_until_quiescent(max_steps=25)
    assert outcome.capped
    assert outcome.steps == 25


def test_run_until_predicate(network: Network) -> None:
    inboxes = wire(network, "ves", "client")
    for body in "abc":
        network.send("ves", "client", Ping(body))
    network.run_until(lambda: len(inboxes["client"].received) == 2, max_steps=10)
    assert network.clock.pending == 1


def test_unknown_target_rejected(network: Network) -> None:
    wire(network, "ves")
    with pytest.raises(NetsimError) as excinfo:
        network.send("ves", "nobody", Ping("x"))
    assert excinfo.value.code == "E_UNKNOWN_ENTITY"
    with pytest.raises(NetsimError):
        wire(network, "ves")


def test_link_rule_to_unregistered_entity_rejected() -> None:
    script = AdversaryScript(links=(LinkRule(source="ves", target="mars", drop_probability=1.0),))
    network = Network(script)
    wire(network, "ves", "client")
    network.send("ves", "client", Ping("x"))
    with pytest.raises(NetsimError) as excinfo:
        network.run_until_quiescent(max_steps=10)
    assert excinfo.value.code == "E_UNKNOWN_ENTITY"
    assert "mars" in excinfo.value.message
    assert network.trace_lines()[-1].startswith("t=0 send")

    wildcard = Network(AdversaryScript(links=(LinkRule(source="*", target="client", delay=2),)))
    inboxes = wire(wildcard, "ves", "client")
    wildcard.send("ves", "client", Ping("y"))
    wildcard.run_until_quiescent(max_steps=10)
    assert inboxes["client"].received == [(2, "ves", "y")]


def test_script_validation() -> None:
    with pytest.raises(ValidationError):
        AdversaryScript(corruptions=(Corruption(party=Party.VES), Corruption(party=Party.CLIENT)))
    with pytest.raises(ValidationError):
        Misbehaviour(kind="withhold")
    with pytest.raises(ValidationError):
        CrashRule(at_tick=3, on_receive=CertKind.INITED)
    corruption = Corruption(
        party=Party.CLIENT,
        behaviours=(Misbehaviour(kind="withhold", hook="inited", seqs=frozenset({3})),),
    )
    assert corruption.find("withhold", 3, "inited") is not None
    assert corruption.find("withhold", 2, "inited") is None
    assert AdversaryScript(corruptions=(corruption,)).honest(Party.VES)
