from __future__ import annotations

from pathlib import Path

import pytest

from src.core.errors import ScenarioError
from src.core.models import Party
from src.domain.isc import TimerConfig
from src.harness import critical_path_blocks, load_scenario, prepare

from ..conftest import PROJECT_ROOT
from .conftest import OPTION, OPTION_SCENARIOS, option_scenario, parse_option, raw_option

GOLDEN_TDG = PROJECT_ROOT / "tests" / "golden" / "option_tdg.json"


def _code(excinfo: pytest.ExceptionInfo[ScenarioError]) -> str:
    return excinfo.value.code


def test_paths_resolve_against_the_scenario_file() -> None:
    scenario = option_scenario("honest")

    assert scenario.program == (OPTION / "option.hsl").resolve()
    assert scenario.interfaces == OPTION.resolve()
    assert scenario.genesis == (OPTION / "genesis.yaml").resolve()


def test_missing_scenario_file_is_not_found(tmp_path: Path) -> None:
    with pytest.raises(ScenarioError) as excinfo:
        load_scenario(tmp_path / "absent.yaml")
    assert _code(excinfo) == "E_NOT_FOUND"


def test_malformed_yaml_is_invalid(tmp_path: Path) -> None:
    path = tmp_path / "broken.yaml"
    path.write_text("name: [unterminated\n", encoding="utf-8")
    with pytest.raises(ScenarioError) as excinfo:
        load_scenario(path)
    assert _code(excinfo) == "E_SCENARIO_INVALID"


@pytest.mark.parametrize(
    "edit",
    [
        pytest.param({"tdg": str(GOLDEN_TDG)}, id="program-and-tdg"),
        pytest.param({"program": None}, id="neither-program-nor-tdg"),
        pytest.param({"colour": "blue"}, id="unknown-field"),
        pytest.param({"adversary": {"links": [{"source": "ves", "target": "mars"}]}}, id="unknown-endpoint"),
        pytest.param({"name": ""}, id="empty-name"),
    ],
)
def test_invalid_scenarios_are_rejected(edit: dict[str, object]) -> None:
    data = {**raw_option(), **edit}
    with pytest.raises(ScenarioError) as excinfo:
        parse_option(data)
    assert _code(excinfo) == "E_SCENARIO_INVALID"
    assert excinfo.value.details is not None


def test_non_mapping_document_is_rejected() -> None:
    with pytest.raises(ScenarioError) as excinfo:
        parse_option(["not", "a", "mapping"])  # type: ignore[arg-type]
    assert _code(excinfo) == "E_SCENARIO_INVALID"


def test_prepare_compiles_the_program() -> None:
    prepared = prepare(option_scenario("honest"))

    assert prepared.tdg.seqs == (1, 2, 3, 4, 5)
    assert prepared.ves_config.refund_accounts[Party.VES] == "0x7e5000"
    assert prepared.nsb_config.quorum.dishonest == frozenset()


def test_prepare_accepts_a_prebuilt_tdg() -> None:
    data = {**raw_option(), "program": None, "interfaces": None, "tdg": str(GOLDEN_TDG)}

    prepared = prepare(parse_option(data))

    assert prepared.tdg.digest() == prepare(option_scenario("honest")).tdg.digest()


def test_adversary_nsb_peers_join_the_quorum_config() -> None:
    prepared = prepare(option_scenario("byzantine-peer"))

    assert prepared.nsb_config.quorum.dishonest == frozenset({3})
    assert prepared.nsb_config.quorum.safe


def test_corrupting_a_missing_peer_is_invalid() -> None:
    data = {**raw_option(), "adversary": {"nsb_dishonest": [9]}}
    with pytest.raises(ScenarioError) as excinfo:
        prepare(parse_option(data))
    assert _code(excinfo) == "E_SCENARIO_INVALID"


def test_critical_path_of_the_option_program() -> None:
    tdg = prepare(option_scenario("honest")).tdg

    assert critical_path_blocks(tdg, TimerConfig()) == 46
    assert critical_path_blocks(tdg, TimerConfig(close_patience_blocks=1)) == 38


def test_short_timer_is_refused() -> None:
    data = {**raw_option(), "timers": {"settle_after_blocks": 20}}
    with pytest.raises(ScenarioError) as excinfo:
        prepare(parse_option(data))
    assert _code(excinfo) == "E_TIMEOUT_TOO_SHORT"
    assert excinfo.value.details == {"timer": 20, "critical_path": 46}


def test_short_timer_is_allowed_when_failure_is_expected() -> None:
    data = {**raw_option(), "timers": {"settle_after_blocks": 20}, "expect_failure": True}

    prepared = prepare(parse_option(data))

    assert prepared.scenario.timers.settle_after_blocks == 20


def test_escrow_must_be_an_isc_contract() -> None:
    data = {**raw_option(), "escrow": "0xbba7c1"}
    with pytest.raises(ScenarioError) as excinfo:
        prepare(parse_option(data))
    assert _code(excinfo) == "E_UNRESOLVED_REFERENCE"


def test_missing_program_surfaces_as_not_found() -> None:
    data = {**raw_option(), "program": "../nowhere.hsl"}
    with pytest.raises(ScenarioError) as excinfo:
        prepare(parse_option(data))
    assert _code(excinfo) == "E_NOT_FOUND"


def test_genesis_without_the_program_chains_is_unresolved(tmp_path: Path) -> None:
    genesis = tmp_path / "genesis.yaml"
    genesis.write_text(
        "chains:\n"
        "  - chain_id: ChainN\n"
        "    accounts:\n"
        '      - {address: "0x7e5000", owner: ves, balances: {ncoin: 500}}\n'
        '      - {address: "0xc11e00", owner: client, balances: {ncoin: 500}}\n'
        "    contracts:\n"
        '      - {address: "0x15c000", handler: isc_escrow, owner: isc}\n',
        encoding="utf-8",
    )
    data = {**raw_option(), "genesis": str(genesis)}
    with pytest.raises(ScenarioError) as excinfo:
        prepare(parse_option(data))
    assert _code(excinfo) == "E_UNRESOLVED_REFERENCE"
    assert "ChainX" in excinfo.value.message


def test_every_shipped_scenario_prepares() -> None:
    for path in sorted(OPTION_SCENARIOS.glob("*.yaml")):
        assert prepare(load_scenario(path)).name.startswith("option-")
