from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import pytest

from src.core.models import Party, TransState
from src.domain.netsim import AdversaryScript, Corruption, LinkRule
from src.domain.parties import Session, WatchingParty
from src.harness import PreparedScenario, World, load_scenario, prepare

from ..conftest import FIXTURES

HONEST = FIXTURES / "option" / "scenarios" / "honest.yaml"
MAX_STEPS = 20_000


@dataclass
class PartyBed:
    """An option-dApp world driven step by step instead of to settlement."""

    world: World
    started: bool = field(default=False)

    def run_until(self, done: Callable[[], bool], max_steps: int = MAX_STEPS) -> None:
        if not self.started:
            self.world.network.schedule(0, "tick", self.world.tick)
            self.started = True
        outcome = self.world.network.run_until(done, max_steps)
        assert not outcome.capped

    def ves_session(self) -> Session:
        return self.world.ves.sessions[self.world.sid]

    def client_session(self) -> Session:
        return self.world.client.sessions[self.world.sid]

    def party(self, party: Party) -> WatchingParty:
        return self.world.ves if party is Party.VES else self.world.client

    def state(self, party: Party, seq: int) -> TransState:
        session = self.party(party).sessions.get(self.world.sid)
        return TransState.UNKNOWN if session is None else session.view(seq).state

    def rejections(self, party: Party) -> list[tuple[str, str, int | None]]:
        session = self.party(party).sessions.get(self.world.sid)
        if session is None:
            return []
        return [(item.code, item.handler, item.seq) for item in session.rejections]

    def both_active(self) -> bool:
        sid = self.world.sid
        sessions = [party.sessions.get(sid) for party in self.world.parties]
        return all(session is not None and session.active for session in sessions)


def prepared_option(
    *corruptions: Corruption, links: tuple[LinkRule, ...] = (), path: Path = HONEST
) -> PreparedScenario:
    scenario = load_scenario(path)
    if corruptions or links:
        script = AdversaryScript(corruptions=corruptions, links=links)
        scenario = scenario.model_copy(update={"adversary": script})
    return prepare(scenario)


def make_bed(*corruptions: Corruption, links: tuple[LinkRule, ...] = (), seed: int = 11) -> PartyBed:
    return PartyBed(World.build(prepared_option(*corruptions, links=links), seed=seed))


@pytest.fixture()
def party_bed() -> PartyBed:
    return make_bed()
